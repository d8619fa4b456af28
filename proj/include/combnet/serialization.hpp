/*
 * Copyright 2026 The combnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// JSON / CSV wire formats. Doubles are written in shortest round-trip form,
// so a value read back is bit-identical to the one written.

#include <cstddef>
#include <ostream>
#include <string>

#include <json.hpp>

#include "combnet/capacity.hpp"
#include "combnet/model.hpp"
#include "combnet/photonics.hpp"
#include "combnet/signalchain.hpp"

namespace combnet::serialization {

using Json = nlohmann::ordered_json;

/// Typed field access with the dotted path in every error message.
class Field {
 public:
  Field(const Json& node, std::string path) : node_(node), path_(std::move(path)) {}

  bool has(const char* key) const { return node_.is_object() && node_.contains(key); }
  Field at(const char* key) const;

  double number() const;
  std::int64_t integer() const;
  std::uint64_t unsigned_integer() const;
  bool boolean() const;
  std::string string() const;
  const Json& raw() const { return node_; }
  const std::string& path() const { return path_; }

  double number_or(const char* key, double fallback) const;
  std::int64_t integer_or(const char* key, std::int64_t fallback) const;
  std::uint64_t unsigned_or(const char* key, std::uint64_t fallback) const;
  bool boolean_or(const char* key, bool fallback) const;
  std::string string_or(const char* key, const std::string& fallback) const;

 private:
  [[noreturn]] void fail(const std::string& expected) const;

  const Json& node_;
  std::string path_;
};

/// Parses text, mapping syntax errors to ErrorCode::kParse.
Json parse_json(const std::string& text, const std::string& origin);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json to_json(const model::PerceptronModel& m);
model::PerceptronModel model_from_json(const Json& j);

Json to_json(const photonics::ShapedComb& comb);

Json to_json(const capacity::ThroughputReport& r);
Json to_json(const capacity::PerceptronThroughput& t);
capacity::NetworkPlan plan_from_json(const Json& j);
Json comparison_table_json();

/// One JSON-lines record per prediction.
Json prediction_row(std::size_t index, const signalchain::PhotonicPrediction& p, int label);

/// `time_s,value` rows.
void write_waveform_csv(std::ostream& out, const std::vector<double>& samples,
                        double sample_rate_hz);

/// Shortest round-trip text for a double ("inf" for infinity).
std::string format_double(double v);

}  // namespace combnet::serialization

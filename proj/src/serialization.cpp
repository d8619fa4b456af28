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
#include "combnet/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "combnet/error.hpp"

namespace combnet::serialization {

Field Field::at(const char* key) const {
  const std::string sub = path_.empty() ? key : path_ + "." + key;
  if (!node_.is_object()) fail("object");
  if (!node_.contains(key)) throw Error(ErrorCode::kParse, "missing field " + sub);
  return Field(node_.at(key), sub);
}

void Field::fail(const std::string& expected) const {
  throw Error(ErrorCode::kParse, "field " + (path_.empty() ? std::string("<root>") : path_) +
                                     ": expected " + expected + ", got " + node_.dump());
}

double Field::number() const {
  if (node_.is_number()) return node_.get<double>();
  if (node_.is_null()) return std::numeric_limits<double>::infinity();
  if (node_.is_string()) {
    const auto s = node_.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return std::numeric_limits<double>::infinity();
  }
  fail("number");
}

std::int64_t Field::integer() const {
  if (node_.is_number_integer()) return node_.get<std::int64_t>();
  if (node_.is_number_float()) {
    const double v = node_.get<double>();
    if (std::floor(v) == v && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  }
  fail("integer");
}

std::uint64_t Field::unsigned_integer() const {
  if (node_.is_number_unsigned()) return node_.get<std::uint64_t>();
  const auto v = integer();
  if (v < 0) fail("non-negative integer");
  return static_cast<std::uint64_t>(v);
}

bool Field::boolean() const {
  if (!node_.is_boolean()) fail("boolean");
  return node_.get<bool>();
}

std::string Field::string() const {
  if (!node_.is_string()) fail("string");
  return node_.get<std::string>();
}

double Field::number_or(const char* key, double fallback) const {
  return has(key) ? at(key).number() : fallback;
}
std::int64_t Field::integer_or(const char* key, std::int64_t fallback) const {
  return has(key) ? at(key).integer() : fallback;
}
std::uint64_t Field::unsigned_or(const char* key, std::uint64_t fallback) const {
  return has(key) ? at(key).unsigned_integer() : fallback;
}
bool Field::boolean_or(const char* key, bool fallback) const {
  return has(key) ? at(key).boolean() : fallback;
}
std::string Field::string_or(const char* key, const std::string& fallback) const {
  return has(key) ? at(key).string() : fallback;
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, origin + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kPath, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kPath, "cannot write " + path);
  out << text;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Json to_json(const model::PerceptronModel& m) {
  Json j;
  j["n"] = m.n();
  j["weights"] = m.weights;
  j["bias"] = m.bias;
  j["weight_mode"] = model::weight_mode_name(m.weight_mode);
  j["train_meta"] = {{"seed", m.train_meta.seed},
                     {"epochs", m.train_meta.epochs},
                     {"learning_rate", m.train_meta.learning_rate},
                     {"final_loss", m.train_meta.final_loss}};
  return j;
}

model::PerceptronModel model_from_json(const Json& j) {
  Field root(j, "");
  model::PerceptronModel m;
  const auto n = root.at("n").unsigned_integer();
  const auto weights = root.at("weights");
  if (!weights.raw().is_array()) throw Error(ErrorCode::kParse, "field weights: expected array");
  for (std::size_t i = 0; i < weights.raw().size(); ++i) {
    m.weights.push_back(Field(weights.raw()[i], "weights[" + std::to_string(i) + "]").number());
  }
  if (m.weights.size() != n) {
    throw Error(ErrorCode::kShape, "model declares n = " + std::to_string(n) + " but has " +
                                       std::to_string(m.weights.size()) + " weights");
  }
  m.bias = root.at("bias").number();
  m.weight_mode = model::parse_weight_mode(root.at("weight_mode").string());
  if (m.weight_mode == model::WeightMode::kNonnegative) {
    for (double w : m.weights) {
      if (w < 0) throw Error(ErrorCode::kDomain, "nonnegative model has a negative weight");
    }
  }
  if (root.has("train_meta")) {
    const auto meta = root.at("train_meta");
    m.train_meta.seed = meta.unsigned_or("seed", 0);
    m.train_meta.epochs = static_cast<int>(meta.integer_or("epochs", 0));
    m.train_meta.learning_rate = meta.number_or("learning_rate", 0.0);
    m.train_meta.final_loss = meta.number_or("final_loss", 0.0);
  }
  return m;
}

Json to_json(const photonics::ShapedComb& comb) {
  Json j;
  j["n_lines"] = comb.n_lines();
  j["fsr_hz"] = comb.fsr_hz;
  j["line_powers_linear"] = comb.line_powers_linear;
  j["target_weights"] = comb.target_weights;
  j["weight_scale"] = comb.weight_scale;
  j["calibration"] = {{"iterations", comb.calibration_iterations},
                      {"converged", comb.calibration_converged}};
  return j;
}

Json to_json(const capacity::ThroughputReport& r) {
  Json j;
  j["convention"] = capacity::convention_name(r.convention);
  j["unit"] = "ops/s";
  Json layers = Json::array();
  for (const auto& l : r.per_layer) {
    layers.push_back({{"waveform_duration_s", l.waveform_duration_s},
                      {"per_neuron_ops_s", l.per_neuron_ops_s},
                      {"total_ops_s", l.total_ops_s},
                      {"wavelengths", l.wavelengths}});
  }
  j["per_layer"] = layers;
  j["network_total_ops_s"] = r.network_total_ops_s;
  j["network_bits_s"] = r.network_bits_s;
  j["latency_s"] = r.latency_s;
  return j;
}

Json to_json(const capacity::PerceptronThroughput& t) {
  return {{"frame_duration_s", t.frame_duration_s},
          {"macs_s", t.macs_s},
          {"ops_s", t.ops_s},
          {"bits_s", t.bits_s}};
}

capacity::NetworkPlan plan_from_json(const Json& j) {
  Field root(j, "");
  capacity::NetworkPlan plan;
  const auto layers = root.at("layers");
  if (!layers.raw().is_array()) throw Error(ErrorCode::kParse, "field layers: expected array");
  for (std::size_t i = 0; i < layers.raw().size(); ++i) {
    Field layer(layers.raw()[i], "layers[" + std::to_string(i) + "]");
    plan.layers.push_back({layer.at("input_dim").unsigned_integer(),
                           layer.at("n_neurons").unsigned_integer()});
  }
  plan.symbol_duration_s = root.at("tau_ps").number() * 1e-12;
  plan.bit_depth = static_cast<int>(root.integer_or("bit_depth", plan.bit_depth));
  plan.buffer_latency_s = root.number_or("buffer_latency_ps", 200.0) * 1e-12;
  plan.buffer_count = static_cast<int>(root.integer_or("buffer_count", plan.buffer_count));
  if (root.boolean_or("buffer_per_layer", false)) {
    plan.buffer_count = static_cast<int>(plan.layers.size());
  }
  if (root.has("convention")) plan.convention = capacity::parse_convention(root.at("convention").string());
  return plan;
}

Json comparison_table_json() {
  auto cell = [](const std::optional<std::string>& v) { return v ? Json(*v) : Json(nullptr); };
  Json rows = Json::array();
  for (const auto& r : capacity::comparison_table()) {
    rows.push_back({{"approach", r.approach},
                    {"citation", r.citation},
                    {"compatibility", cell(r.compatibility)},
                    {"latency", cell(r.latency)},
                    {"ops", cell(r.ops)},
                    {"bits_s", cell(r.bits_s)}});
  }
  return rows;
}

Json prediction_row(std::size_t index, const signalchain::PhotonicPrediction& p, int label) {
  return {{"index", index},
          {"dot_estimate", p.dot_estimate},
          {"score", p.score},
          {"class", p.cls},
          {"label", label}};
}

void write_waveform_csv(std::ostream& out, const std::vector<double>& samples,
                        double sample_rate_hz) {
  out << "time_s,value\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << format_double(static_cast<double>(i) / sample_rate_hz) << ','
        << format_double(samples[i]) << '\n';
  }
}

}  // namespace combnet::serialization

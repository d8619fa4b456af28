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

// Run configuration and the `combnet` subcommands. Every command is also
// callable in-process; the returned JSON is exactly what gets written.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "combnet/dataset.hpp"
#include "combnet/model.hpp"
#include "combnet/photonics.hpp"
#include "combnet/serialization.hpp"
#include "combnet/signalchain.hpp"

namespace combnet::cli {

using serialization::Json;

/// Environment variable naming the output directory when neither the
/// command line nor the config sets one.
inline constexpr const char* kOutputDirEnv = "COMBNET_OUTPUT_DIR";

struct DataPaths {
  std::string mnist_images;
  std::string mnist_labels;
  std::string wdbc_csv;
};

struct DigitTask {
  int negative_digit = 6;
  int positive_digit = 0;
  std::size_t per_digit_cap = 500;
  dataset::DownsampleMethod downsample = dataset::DownsampleMethod::kBlockMean;
};

struct SplitConfig {
  std::size_t n_train = 920;
  std::size_t n_test = 80;
  std::uint64_t seed = 1;
};

enum class CombProfile { kFlat, kSech2, kCustom };

struct CombConfig {
  CombProfile profile = CombProfile::kFlat;
  double fsr_hz = 48.9e9;
  double center_wavelength_nm = 1550.0;
  double peak_dbm = 0.0;
  double sech2_width_lines = 20.0;
  std::vector<double> raw_line_powers_dbm;

  /// Comb with one line per weight.
  photonics::CombSpec build(std::size_t n_lines) const;
};

struct RunConfig {
  dataset::Task task = dataset::Task::kDigits;
  DataPaths paths;
  DigitTask digits;
  SplitConfig split;
  model::TrainConfig train;
  CombConfig comb;
  photonics::ShaperConfig shaper;
  std::uint64_t calibration_seed = 0;
  signalchain::ChainConfig chain;
  std::string output_dir;
};

/// Sets the leaf at a dotted path ("chain.impairments.seed=3"). The value is
/// parsed as JSON when possible, otherwise taken as a string.
void apply_override(Json& doc, const std::string& assignment);

/// Relative data paths resolve against `base_dir`.
RunConfig run_config_from_json(const Json& doc, const std::filesystem::path& base_dir);

/// Complete, canonical form of a config; feeding it back reproduces the run.
Json run_config_to_json(const RunConfig& cfg);

/// Reads a config file, applies overrides, and picks the output directory:
/// `output_dir_flag`, else the config's output_dir, else $COMBNET_OUTPUT_DIR,
/// else "combnet-out".
RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides = {},
                          const std::optional<std::string>& output_dir_flag = {});

std::vector<dataset::Sample> load_task_samples(const RunConfig& cfg);
dataset::DatasetSplit load_split(const RunConfig& cfg);

struct TrainResult {
  model::PerceptronModel model;
  Json report;
};

/// Trains, evaluates on the test split, writes model.json and
/// train_report.json into the output directory.
TrainResult cmd_train(const RunConfig& cfg, unsigned threads = 1);

/// Runs the photonic chain over the test split; writes predictions.jsonl and
/// simulate_report.json. An empty model_file means <output_dir>/model.json.
Json cmd_simulate(const RunConfig& cfg, const std::string& model_file, unsigned threads = 1);

enum class SweepAxis { kSnrDb, kAwgBits, kShaperRangeDb };
SweepAxis parse_sweep_axis(const std::string& name);
const char* sweep_axis_name(SweepAxis axis);

struct SweepRow {
  double value = 0.0;
  double mean_accuracy = 0.0;
  double std = 0.0;
};

/// Photonic test accuracy per axis value, over `seeds` noise/calibration
/// seeds; writes sweep_<axis>.csv. Without a model file the model is
/// trained from the config.
std::vector<SweepRow> cmd_sweep(const RunConfig& cfg, SweepAxis axis,
                                const std::vector<double>& values, int seeds,
                                const std::string& model_file = "", unsigned threads = 1);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Throughput report for a plan file.
Json cmd_plan(const std::string& plan_file);

/// Writes encoded_input.csv, detected_output.csv, optional per-channel
/// traces and trace_summary.json under <output_dir>/trace_<index>/.
Json cmd_export_trace(const RunConfig& cfg, const std::string& model_file,
                      std::size_t sample_index, bool per_channel = false);

/// Comparison table as "csv" or "json".
std::string cmd_table1(const std::string& format);

/// Entry point for the executable. Returns the process exit status.
int run(int argc, char** argv);

}  // namespace combnet::cli

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
#include "combnet/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "combnet/capacity.hpp"
#include "combnet/error.hpp"

namespace combnet::cli {

namespace fs = std::filesystem;
using serialization::Field;

namespace {

std::string resolve_path(const std::string& p, const fs::path& base) {
  if (p.empty()) return p;
  fs::path path(p);
  if (path.is_relative()) path = base / path;
  return fs::weakly_canonical(path).string();
}

const char* downsample_name(dataset::DownsampleMethod m) {
  return m == dataset::DownsampleMethod::kBlockMean ? "block_mean" : "stride";
}

dataset::DownsampleMethod parse_downsample(const std::string& s) {
  if (s == "block_mean") return dataset::DownsampleMethod::kBlockMean;
  if (s == "stride") return dataset::DownsampleMethod::kStride;
  throw Error(ErrorCode::kParse, "field digits.downsample: expected block_mean|stride");
}

const char* profile_name(CombProfile p) {
  switch (p) {
    case CombProfile::kFlat: return "flat";
    case CombProfile::kSech2: return "sech2";
    case CombProfile::kCustom: return "custom";
  }
  return "flat";
}

CombProfile parse_profile(const std::string& s) {
  if (s == "flat") return CombProfile::kFlat;
  if (s == "sech2") return CombProfile::kSech2;
  if (s == "custom") return CombProfile::kCustom;
  throw Error(ErrorCode::kParse, "field photonics.comb.profile: expected flat|sech2|custom");
}

Json number_or_inf(double v) { return std::isinf(v) ? Json("inf") : Json(v); }

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

std::string model_path_or_default(const RunConfig& cfg, const std::string& model_file) {
  return model_file.empty() ? (fs::path(cfg.output_dir) / "model.json").string() : model_file;
}

model::PerceptronModel load_model(const std::string& path) {
  return serialization::model_from_json(serialization::read_json_file(path));
}

void check_model_matches(const model::PerceptronModel& m, const dataset::DatasetSplit& split) {
  if (split.test.empty()) throw Error(ErrorCode::kEmptyInput, "test set is empty");
  if (split.test.front().features.size() != m.n()) {
    throw Error(ErrorCode::kShape, "model has " + std::to_string(m.n()) +
                                       " weights but the task has " +
                                       std::to_string(split.test.front().features.size()) +
                                       " features");
  }
}

Json confusion_json(const model::Evaluation& ev) {
  return {{"label0_pred0", ev.confusion[0][0]},
          {"label0_pred1", ev.confusion[0][1]},
          {"label1_pred0", ev.confusion[1][0]},
          {"label1_pred1", ev.confusion[1][1]}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

photonics::CombSpec CombConfig::build(std::size_t n_lines) const {
  photonics::CombSpec spec;
  switch (profile) {
    case CombProfile::kFlat: spec = photonics::flat_comb(n_lines, peak_dbm); break;
    case CombProfile::kSech2: spec = photonics::sech2_comb(n_lines, peak_dbm, sech2_width_lines); break;
    case CombProfile::kCustom:
      spec.n_lines = n_lines;
      spec.raw_line_powers_dbm = raw_line_powers_dbm;
      break;
  }
  spec.fsr_hz = fsr_hz;
  spec.center_wavelength_nm = center_wavelength_nm;
  return spec;
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::kUsage, "override '" + assignment + "' is not key.path=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    value = text;
  }
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw Error(ErrorCode::kUsage, "override path '" + path + "' has an empty key");
    if (!node->is_object()) {
      if (!node->is_null()) throw Error(ErrorCode::kUsage, "override path '" + path + "' crosses a leaf");
      *node = Json::object();
    }
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

RunConfig run_config_from_json(const Json& doc, const fs::path& base_dir) {
  Field root(doc, "");
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "config root must be an object");
  RunConfig cfg;
  cfg.task = dataset::parse_task(root.string_or("task", "digits"));

  if (root.has("paths")) {
    const auto p = root.at("paths");
    cfg.paths.mnist_images = resolve_path(p.string_or("mnist_images", ""), base_dir);
    cfg.paths.mnist_labels = resolve_path(p.string_or("mnist_labels", ""), base_dir);
    cfg.paths.wdbc_csv = resolve_path(p.string_or("wdbc_csv", ""), base_dir);
  }
  if (root.has("digits")) {
    const auto d = root.at("digits");
    cfg.digits.negative_digit = static_cast<int>(d.integer_or("negative_digit", 6));
    cfg.digits.positive_digit = static_cast<int>(d.integer_or("positive_digit", 0));
    cfg.digits.per_digit_cap = d.unsigned_or("per_digit_cap", 500);
    cfg.digits.downsample = parse_downsample(d.string_or("downsample", "block_mean"));
  }

  const bool digits = cfg.task == dataset::Task::kDigits;
  cfg.split = SplitConfig{digits ? 920u : 494u, digits ? 80u : 75u, 1};
  if (root.has("split")) {
    const auto s = root.at("split");
    cfg.split.n_train = s.unsigned_or("n_train", cfg.split.n_train);
    cfg.split.n_test = s.unsigned_or("n_test", cfg.split.n_test);
    cfg.split.seed = s.unsigned_or("seed", cfg.split.seed);
  }
  if (root.has("train")) {
    const auto t = root.at("train");
    cfg.train.learning_rate = t.number_or("learning_rate", cfg.train.learning_rate);
    cfg.train.epochs = static_cast<int>(t.integer_or("epochs", cfg.train.epochs));
    cfg.train.seed = t.unsigned_or("seed", cfg.train.seed);
    cfg.train.init_scale = t.number_or("init_scale", cfg.train.init_scale);
    if (t.has("weight_mode")) cfg.train.weight_mode = model::parse_weight_mode(t.at("weight_mode").string());
  }
  if (root.has("photonics")) {
    const auto ph = root.at("photonics");
    cfg.calibration_seed = ph.unsigned_or("calibration_seed", 0);
    if (ph.has("comb")) {
      const auto c = ph.at("comb");
      cfg.comb.profile = parse_profile(c.string_or("profile", "flat"));
      cfg.comb.fsr_hz = c.number_or("fsr_hz", cfg.comb.fsr_hz);
      cfg.comb.center_wavelength_nm = c.number_or("center_wavelength_nm", cfg.comb.center_wavelength_nm);
      cfg.comb.peak_dbm = c.number_or("peak_dbm", cfg.comb.peak_dbm);
      cfg.comb.sech2_width_lines = c.number_or("sech2_width_lines", cfg.comb.sech2_width_lines);
      if (c.has("raw_line_powers_dbm")) {
        const auto arr = c.at("raw_line_powers_dbm");
        for (std::size_t i = 0; i < arr.raw().size(); ++i) {
          cfg.comb.raw_line_powers_dbm.push_back(
              Field(arr.raw()[i], arr.path() + "[" + std::to_string(i) + "]").number());
        }
      }
    }
    if (ph.has("shaper")) {
      const auto s = ph.at("shaper");
      auto& sh = cfg.shaper;
      sh.attenuation_range_db = s.number_or("attenuation_range_db", sh.attenuation_range_db);
      sh.measurement_noise_sigma_db = s.number_or("measurement_noise_sigma_db", sh.measurement_noise_sigma_db);
      sh.loss_error_sigma_db = s.number_or("loss_error_sigma_db", sh.loss_error_sigma_db);
      sh.tolerance_db = s.number_or("tolerance_db", sh.tolerance_db);
      sh.max_iterations = static_cast<int>(s.integer_or("max_iterations", sh.max_iterations));
      sh.quantize = s.boolean_or("quantize", sh.quantize);
      sh.apply_floor = s.boolean_or("apply_floor", sh.apply_floor);
    }
  }
  if (root.has("chain")) {
    const auto ch = root.at("chain");
    if (ch.has("waveform")) {
      const auto w = ch.at("waveform");
      auto& wf = cfg.chain.waveform;
      wf.sample_rate_hz = w.number_or("sample_rate_hz", wf.sample_rate_hz);
      wf.samples_per_symbol = static_cast<int>(w.integer_or("samples_per_symbol", wf.samples_per_symbol));
      wf.awg_bits = static_cast<int>(w.integer_or("awg_bits", wf.awg_bits));
      wf.analog_bandwidth_hz = w.number_or("analog_bandwidth_hz", wf.analog_bandwidth_hz);
    }
    if (ch.has("fiber")) {
      const auto f = ch.at("fiber");
      auto& fb = cfg.chain.fiber;
      fb.length_km = f.number_or("length_km", fb.length_km);
      fb.dispersion_ps_per_nm_km = f.number_or("dispersion_ps_per_nm_km", fb.dispersion_ps_per_nm_km);
      fb.delay_jitter_ps_sigma = f.number_or("delay_jitter_ps_sigma", fb.delay_jitter_ps_sigma);
      if (f.has("delay_mode")) fb.delay_mode = signalchain::parse_delay_mode(f.at("delay_mode").string());
    }
    if (ch.has("impairments")) {
      const auto i = ch.at("impairments");
      auto& imp = cfg.chain.impairments;
      imp.electrical_snr_db = i.number_or("electrical_snr_db", imp.electrical_snr_db);
      imp.awg_quantize = i.boolean_or("awg_quantize", imp.awg_quantize);
      imp.bandwidth_filter = i.boolean_or("bandwidth_filter", imp.bandwidth_filter);
      imp.seed = i.unsigned_or("seed", imp.seed);
      imp.osnr_db = i.number_or("osnr_db", imp.osnr_db);
    }
  }
  cfg.output_dir = root.string_or("output_dir", "");
  if (!cfg.output_dir.empty()) cfg.output_dir = resolve_path(cfg.output_dir, base_dir);
  return cfg;
}

Json run_config_to_json(const RunConfig& cfg) {
  Json j;
  j["task"] = dataset::task_name(cfg.task);
  j["paths"] = {{"mnist_images", cfg.paths.mnist_images},
                {"mnist_labels", cfg.paths.mnist_labels},
                {"wdbc_csv", cfg.paths.wdbc_csv}};
  j["digits"] = {{"negative_digit", cfg.digits.negative_digit},
                 {"positive_digit", cfg.digits.positive_digit},
                 {"per_digit_cap", cfg.digits.per_digit_cap},
                 {"downsample", downsample_name(cfg.digits.downsample)}};
  j["split"] = {{"n_train", cfg.split.n_train}, {"n_test", cfg.split.n_test}, {"seed", cfg.split.seed}};
  j["train"] = {{"learning_rate", cfg.train.learning_rate},
                {"epochs", cfg.train.epochs},
                {"seed", cfg.train.seed},
                {"weight_mode", model::weight_mode_name(cfg.train.weight_mode)},
                {"init_scale", cfg.train.init_scale}};
  const auto& sh = cfg.shaper;
  j["photonics"] = {
      {"calibration_seed", cfg.calibration_seed},
      {"comb",
       {{"profile", profile_name(cfg.comb.profile)},
        {"fsr_hz", cfg.comb.fsr_hz},
        {"center_wavelength_nm", cfg.comb.center_wavelength_nm},
        {"peak_dbm", cfg.comb.peak_dbm},
        {"sech2_width_lines", cfg.comb.sech2_width_lines},
        {"raw_line_powers_dbm", cfg.comb.raw_line_powers_dbm}}},
      {"shaper",
       {{"attenuation_range_db", sh.attenuation_range_db},
        {"measurement_noise_sigma_db", sh.measurement_noise_sigma_db},
        {"loss_error_sigma_db", sh.loss_error_sigma_db},
        {"tolerance_db", sh.tolerance_db},
        {"max_iterations", sh.max_iterations},
        {"quantize", sh.quantize},
        {"apply_floor", sh.apply_floor}}}};
  const auto& wf = cfg.chain.waveform;
  const auto& fb = cfg.chain.fiber;
  const auto& imp = cfg.chain.impairments;
  j["chain"] = {
      {"waveform",
       {{"sample_rate_hz", wf.sample_rate_hz},
        {"samples_per_symbol", wf.samples_per_symbol},
        {"awg_bits", wf.awg_bits},
        {"analog_bandwidth_hz", wf.analog_bandwidth_hz}}},
      {"fiber",
       {{"length_km", fb.length_km},
        {"dispersion_ps_per_nm_km", fb.dispersion_ps_per_nm_km},
        {"delay_mode", signalchain::delay_mode_name(fb.delay_mode)},
        {"delay_jitter_ps_sigma", fb.delay_jitter_ps_sigma}}},
      {"impairments",
       {{"electrical_snr_db", number_or_inf(imp.electrical_snr_db)},
        {"awg_quantize", imp.awg_quantize},
        {"bandwidth_filter", imp.bandwidth_filter},
        {"seed", imp.seed},
        {"osnr_db", imp.osnr_db}}}};
  j["output_dir"] = cfg.output_dir;
  return j;
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides,
                          const std::optional<std::string>& output_dir_flag) {
  Json doc = serialization::read_json_file(path);
  for (const auto& o : overrides) apply_override(doc, o);
  const fs::path base = fs::absolute(fs::path(path)).parent_path();
  RunConfig cfg = run_config_from_json(doc, base);
  if (output_dir_flag) {
    cfg.output_dir = fs::weakly_canonical(fs::absolute(*output_dir_flag)).string();
  } else if (cfg.output_dir.empty()) {
    const char* env = std::getenv(kOutputDirEnv);
    cfg.output_dir = fs::weakly_canonical(fs::absolute(env && *env ? env : "combnet-out")).string();
  }
  return cfg;
}

std::vector<dataset::Sample> load_task_samples(const RunConfig& cfg) {
  if (cfg.task == dataset::Task::kCancer) return dataset::load_wdbc(cfg.paths.wdbc_csv);
  const auto images = dataset::load_mnist(cfg.paths.mnist_images, cfg.paths.mnist_labels,
                                          {cfg.digits.negative_digit, cfg.digits.positive_digit},
                                          cfg.digits.per_digit_cap);
  return dataset::digit_samples(images, cfg.digits.positive_digit, cfg.digits.downsample);
}

dataset::DatasetSplit load_split(const RunConfig& cfg) {
  return dataset::split(load_task_samples(cfg), cfg.split.n_train, cfg.split.n_test,
                        cfg.split.seed, cfg.task);
}

TrainResult cmd_train(const RunConfig& cfg, unsigned threads) {
  const auto split = load_split(cfg);
  TrainResult out;
  out.model = model::train(split, cfg.train);
  const auto train_ev = model::evaluate(out.model, split.train, threads);
  const auto test_ev = model::evaluate(out.model, split.test, threads);

  out.report["config_echo"] = run_config_to_json(cfg);
  out.report["task"] = dataset::task_name(cfg.task);
  out.report["n_train"] = split.train.size();
  out.report["n_test"] = split.test.size();
  out.report["final_loss"] = out.model.train_meta.final_loss;
  out.report["train_accuracy"] = train_ev.accuracy;
  out.report["digital_accuracy"] = test_ev.accuracy;
  out.report["confusion"] = confusion_json(test_ev);

  const auto dir = output_dir(cfg);
  serialization::write_text_file((dir / "model.json").string(), dump(serialization::to_json(out.model)));
  serialization::write_text_file((dir / "train_report.json").string(), dump(out.report));
  return out;
}

Json cmd_simulate(const RunConfig& cfg, const std::string& model_file, unsigned threads) {
  const auto m = load_model(model_path_or_default(cfg, model_file));
  const auto split = load_split(cfg);
  check_model_matches(m, split);

  const auto comb = signalchain::prepare_comb(m, cfg.comb.build(m.n()), cfg.shaper, cfg.calibration_seed);
  const auto preds = signalchain::run_batch(split.test, m, comb, cfg.chain, threads);

  std::vector<int> labels, photonic, digital;
  std::ostringstream rows;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    labels.push_back(split.test[i].label);
    photonic.push_back(preds[i].cls);
    digital.push_back(model::predict_digital(m, split.test[i]).cls);
    agree += photonic.back() == digital.back();
    rows << serialization::prediction_row(i, preds[i], split.test[i].label).dump() << '\n';
  }
  const auto ph_ev = model::tally(labels, photonic);
  const auto dg_ev = model::tally(labels, digital);

  const double tau = cfg.chain.waveform.symbol_duration_s();
  const int bits = cfg.chain.waveform.awg_bits;
  Json report;
  report["config_echo"] = run_config_to_json(cfg);
  report["task"] = dataset::task_name(cfg.task);
  report["n_test"] = split.test.size();
  report["digital_accuracy"] = dg_ev.accuracy;
  report["photonic_accuracy"] = ph_ev.accuracy;
  report["class_agreement"] = static_cast<double>(agree) / static_cast<double>(preds.size());
  report["confusion_photonic"] = confusion_json(ph_ev);
  report["confusion_digital"] = confusion_json(dg_ev);
  report["comb"] = serialization::to_json(comb);
  report["throughput"] = {
      {"n", m.n()},
      {"symbol_duration_s", tau},
      {"frame_2N", serialization::to_json(capacity::perceptron_throughput(
                       m.n(), tau, bits, capacity::FrameConvention::kFrame2N))},
      {"frame_2N_minus_1", serialization::to_json(capacity::perceptron_throughput(
                               m.n(), tau, bits, capacity::FrameConvention::kFrame2NMinus1))},
      {"fiber_time_of_flight_s", signalchain::fiber_time_of_flight_s(cfg.chain.fiber)}};

  const auto dir = output_dir(cfg);
  serialization::write_text_file((dir / "predictions.jsonl").string(), rows.str());
  serialization::write_text_file((dir / "simulate_report.json").string(), dump(report));
  return report;
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "snr_db") return SweepAxis::kSnrDb;
  if (name == "awg_bits") return SweepAxis::kAwgBits;
  if (name == "shaper_range_db") return SweepAxis::kShaperRangeDb;
  throw Error(ErrorCode::kUsage, "unknown sweep axis '" + name + "' (expected snr_db|awg_bits|shaper_range_db)");
}

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kSnrDb: return "snr_db";
    case SweepAxis::kAwgBits: return "awg_bits";
    case SweepAxis::kShaperRangeDb: return "shaper_range_db";
  }
  return "snr_db";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "value,mean_accuracy,std\n";
  for (const auto& r : rows) {
    out << serialization::format_double(r.value) << ',' << serialization::format_double(r.mean_accuracy)
        << ',' << serialization::format_double(r.std) << '\n';
  }
  return out.str();
}

std::vector<SweepRow> cmd_sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                                int seeds, const std::string& model_file, unsigned threads) {
  if (values.empty()) throw Error(ErrorCode::kUsage, "sweep needs at least one value");
  if (seeds < 1) throw Error(ErrorCode::kUsage, "sweep needs at least one seed");
  const auto split = load_split(cfg);
  const auto m = model_file.empty() ? model::train(split, cfg.train) : load_model(model_file);
  check_model_matches(m, split);
  const auto comb_spec = cfg.comb.build(m.n());

  std::vector<SweepRow> rows;
  for (double v : values) {
    RunConfig run = cfg;
    switch (axis) {
      case SweepAxis::kSnrDb: run.chain.impairments.electrical_snr_db = v; break;
      case SweepAxis::kAwgBits:
        if (v < 1 || std::floor(v) != v) throw Error(ErrorCode::kUsage, "awg_bits values must be positive integers");
        run.chain.waveform.awg_bits = static_cast<int>(v);
        run.chain.impairments.awg_quantize = true;
        break;
      case SweepAxis::kShaperRangeDb: run.shaper.attenuation_range_db = v; break;
    }
    std::vector<double> acc(static_cast<std::size_t>(seeds));
    for (int s = 0; s < seeds; ++s) {
      RunConfig seeded = run;
      seeded.chain.impairments.seed = cfg.chain.impairments.seed + static_cast<std::uint64_t>(s);
      const auto comb = signalchain::prepare_comb(m, comb_spec, seeded.shaper,
                                                  cfg.calibration_seed + static_cast<std::uint64_t>(s));
      const auto preds = signalchain::run_batch(split.test, m, comb, seeded.chain, threads);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < preds.size(); ++i) correct += preds[i].cls == split.test[i].label;
      acc[static_cast<std::size_t>(s)] = static_cast<double>(correct) / static_cast<double>(preds.size());
    }
    SweepRow row;
    row.value = v;
    row.mean_accuracy = std::accumulate(acc.begin(), acc.end(), 0.0) / static_cast<double>(acc.size());
    double ss = 0.0;
    for (double a : acc) ss += (a - row.mean_accuracy) * (a - row.mean_accuracy);
    row.std = acc.size() > 1 ? std::sqrt(ss / static_cast<double>(acc.size() - 1)) : 0.0;
    rows.push_back(row);
  }
  const auto dir = output_dir(cfg);
  serialization::write_text_file((dir / (std::string("sweep_") + sweep_axis_name(axis) + ".csv")).string(),
                                 sweep_csv(rows));
  return rows;
}

Json cmd_plan(const std::string& plan_file) {
  const auto doc = serialization::read_json_file(plan_file);
  const auto plan = serialization::plan_from_json(doc);
  Json report = serialization::to_json(capacity::network_throughput(plan));
  report["wavelengths"] = capacity::wavelengths_required(plan);
  if (doc.contains("fiber_length_km")) {
    signalchain::FiberSpec fiber;
    fiber.length_km = Field(doc, "").at("fiber_length_km").number();
    report["fiber_time_of_flight_s"] = signalchain::fiber_time_of_flight_s(fiber);
  }
  return report;
}

Json cmd_export_trace(const RunConfig& cfg, const std::string& model_file, std::size_t sample_index,
                      bool per_channel) {
  const auto m = load_model(model_path_or_default(cfg, model_file));
  const auto split = load_split(cfg);
  check_model_matches(m, split);
  if (sample_index >= split.test.size()) {
    throw Error(ErrorCode::kIndex, "sample index " + std::to_string(sample_index) +
                                       " outside test set of " + std::to_string(split.test.size()));
  }
  const auto& sample = split.test[sample_index];
  const auto comb = signalchain::prepare_comb(m, cfg.comb.build(m.n()), cfg.shaper, cfg.calibration_seed);
  const auto pred = signalchain::run_perceptron(sample, m, comb, cfg.chain, sample_index, true);
  const auto encoded = signalchain::encode_waveform(sample.features, m.bias, cfg.chain.waveform,
                                                    cfg.chain.impairments);

  const auto dir = output_dir(cfg) / ("trace_" + std::to_string(sample_index));
  fs::create_directories(dir);
  auto write_csv = [](const fs::path& p, const std::vector<double>& samples, double rate) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::kPath, "cannot write " + p.string());
    serialization::write_waveform_csv(out, samples, rate);
  };
  write_csv(dir / "encoded_input.csv", encoded.samples, encoded.sample_rate_hz);
  write_csv(dir / "detected_output.csv", pred.raw_trace->samples, pred.raw_trace->sample_rate_hz);
  if (per_channel) {
    const auto channels = signalchain::broadcast_modulate(encoded, comb);
    fs::create_directories(dir / "channels");
    for (std::size_t k = 0; k < channels.envelopes.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof(name), "ch_%02zu.csv", k + 1);
      write_csv(dir / "channels" / name, channels.envelopes[k], channels.sample_rate_hz);
    }
  }

  const auto& frame = pred.raw_trace->frame;
  Json summary;
  summary["config_echo"] = run_config_to_json(cfg);
  summary["index"] = sample_index;
  summary["label"] = sample.label;
  summary["n"] = m.n();
  summary["samples_per_symbol"] = frame.samples_per_symbol;
  summary["detected_samples"] = pred.raw_trace->samples.size();
  summary["center_sample_index"] = frame.slot_center(frame.n_data_symbols - 1);
  summary["reference_sample_index"] = frame.slot_center(frame.pad_slot(1));
  summary["bias_sample_index"] = frame.slot_center(frame.pad_slot(2));
  summary["center_value"] = pred.center_value;
  summary["reference_value"] = pred.reference_value;
  summary["weight_scale"] = comb.weight_scale;
  summary["dot_estimate"] = pred.dot_estimate;
  summary["score"] = pred.score;
  summary["class"] = pred.cls;
  serialization::write_text_file((dir / "trace_summary.json").string(), dump(summary));
  return summary;
}

std::string cmd_table1(const std::string& format) {
  if (format == "csv") return capacity::comparison_table_csv();
  if (format == "json") return dump(serialization::comparison_table_json());
  throw Error(ErrorCode::kUsage, "unknown table format '" + format + "' (expected csv|json)");
}

namespace {

void print_error(std::string_view tag, const std::string& message) {
  Json j{{"error", tag}, {"message", message}};
  std::cerr << j.dump() << std::endl;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kUsage, "sweep value '" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"combnet: microcomb broadcast-and-delay perceptron simulator and ONN planner"};
  app.require_subcommand(1);

  std::string config_path, model_file, output_flag, axis_name, values_text, plan_file, format = "csv",
                                                                                     out_file;
  std::vector<std::string> overrides;
  unsigned threads = 1;
  int seeds = 20;
  std::size_t sample_index = 0;
  bool channels = false;

  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--set", overrides, "override a config leaf, e.g. chain.impairments.seed=3");
    sub->add_option("--output", output_flag, "output directory");
    sub->add_option("--threads", threads, "worker threads (results do not depend on it)");
  };

  auto* train = app.add_subcommand("train", "train the perceptron and evaluate it digitally");
  add_run_options(train);
  auto* simulate = app.add_subcommand("simulate", "run the photonic chain over the test set");
  add_run_options(simulate);
  simulate->add_option("--model", model_file, "model JSON (default <output>/model.json)");
  auto* sweep = app.add_subcommand("sweep", "accuracy versus one impairment axis");
  add_run_options(sweep);
  sweep->add_option("--axis", axis_name, "snr_db | awg_bits | shaper_range_db")->required();
  sweep->add_option("--values", values_text, "comma-separated axis values")->required();
  sweep->add_option("--seeds", seeds, "seeds per value");
  sweep->add_option("--model", model_file, "model JSON (default: train from config)");
  auto* plan = app.add_subcommand("plan", "throughput and latency of a network plan");
  plan->add_option("plan", plan_file, "plan JSON")->required();
  plan->add_option("--out", out_file, "write the report here instead of stdout");
  auto* trace = app.add_subcommand("export-trace", "write waveforms for one test sample");
  add_run_options(trace);
  trace->add_option("--model", model_file, "model JSON (default <output>/model.json)");
  trace->add_option("--index", sample_index, "test-set sample index");
  trace->add_flag("--channels", channels, "also write every channel envelope");
  auto* table = app.add_subcommand("table1", "published ONN speed comparison");
  table->add_option("--format", format, "csv | json");
  table->add_option("--out", out_file, "write here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    auto config = [&] {
      return load_run_config(config_path, overrides,
                             output_flag.empty() ? std::nullopt : std::optional<std::string>(output_flag));
    };
    auto emit = [&](const std::string& text) {
      if (out_file.empty()) {
        std::cout << text;
      } else {
        serialization::write_text_file(out_file, text);
      }
    };
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    if (*train) {
      const auto cfg = config();
      const auto r = cmd_train(cfg, threads);
      std::cout << "digital_accuracy " << serialization::format_double(r.report["digital_accuracy"].get<double>())
                << "\nwrote " << cfg.output_dir << "/model.json\n";
      std::cerr << "elapsed_s " << elapsed() << "\n";
    } else if (*simulate) {
      const auto cfg = config();
      const auto r = cmd_simulate(cfg, model_file, threads);
      std::cout << "digital_accuracy " << serialization::format_double(r["digital_accuracy"].get<double>())
                << "\nphotonic_accuracy " << serialization::format_double(r["photonic_accuracy"].get<double>())
                << "\nwrote " << cfg.output_dir << "/simulate_report.json\n";
      std::cerr << "elapsed_s " << elapsed() << "\n";
    } else if (*sweep) {
      const auto cfg = config();
      const auto rows = cmd_sweep(cfg, parse_sweep_axis(axis_name), parse_values(values_text), seeds,
                                  model_file, threads);
      std::cout << sweep_csv(rows);
      std::cerr << "elapsed_s " << elapsed() << "\n";
    } else if (*plan) {
      emit(dump(cmd_plan(plan_file)));
    } else if (*trace) {
      const auto cfg = config();
      const auto s = cmd_export_trace(cfg, model_file, sample_index, channels);
      std::cout << "dot_estimate " << serialization::format_double(s["dot_estimate"].get<double>())
                << "\nwrote " << cfg.output_dir << "/trace_" << sample_index << "/\n";
    } else if (*table) {
      emit(cmd_table1(format));
    }
    return 0;
  } catch (const Error& e) {
    print_error(error_tag(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    print_error("path", e.what());
    return 3;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 4;
  }
}

}  // namespace combnet::cli

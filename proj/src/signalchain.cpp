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
#include "combnet/signalchain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "combnet/error.hpp"
#include "combnet/runtime.hpp"

namespace combnet::signalchain {

namespace {

// Salt for the fibre jitter stream so it never coincides with a per-sample
// noise stream.
constexpr std::uint64_t kJitterStream = 0x6a09e667f3bcc908ULL;

// Delay in samples, snapped to an integer when it is one up to rounding.
double delay_samples(double delay_ps, double sample_rate_hz) {
  const double d = delay_ps * 1e-12 * sample_rate_hz;
  const double r = std::round(d);
  return std::abs(d - r) < 1e-6 ? r : d;
}

}  // namespace

const char* delay_mode_name(DelayMode mode) {
  return mode == DelayMode::kNominalTau ? "nominal_tau" : "dispersion_derived";
}

DelayMode parse_delay_mode(const std::string& name) {
  if (name == "nominal_tau") return DelayMode::kNominalTau;
  if (name == "dispersion_derived") return DelayMode::kDispersionDerived;
  throw Error(ErrorCode::kUsage,
              "unknown delay_mode '" + name + "' (expected nominal_tau|dispersion_derived)");
}

ImpairmentConfig ImpairmentConfig::ideal() {
  ImpairmentConfig imp;
  imp.awg_quantize = false;
  return imp;
}

BiasEncoding bias_encoding_for(double bias) {
  const double half = bias != 0.0 ? 2.0 * std::abs(bias) : 1.0;
  return {-half, half};
}

double quantize_level(double level, int bits) {
  const double top = std::ldexp(1.0, bits) - 1.0;
  return std::round(level * top) / top;
}

ElectricalWaveform encode_waveform(std::span<const double> x, double bias,
                                   const WaveformSpec& spec, const ImpairmentConfig& imp) {
  if (spec.samples_per_symbol < 1 || spec.awg_bits < 1 || !(spec.sample_rate_hz > 0)) {
    throw Error(ErrorCode::kUsage, "invalid waveform spec");
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= 0.0 && x[k] <= 1.0)) {
      throw Error(ErrorCode::kDomain,
                  "feature " + std::to_string(k) + " = " + std::to_string(x[k]) + " is outside [0,1]");
    }
  }
  ElectricalWaveform w;
  w.sample_rate_hz = spec.sample_rate_hz;
  w.frame.kind = FrameKind::kEncoded;
  w.frame.n_data_symbols = x.size();
  w.frame.samples_per_symbol = spec.samples_per_symbol;
  w.frame.bias_encoding = bias_encoding_for(bias);
  w.frame.bias_level = w.frame.bias_encoding.to_level(bias);

  std::vector<double> symbols(x.begin(), x.end());
  symbols.push_back(w.frame.trigger_level);
  symbols.push_back(w.frame.reference_level);
  symbols.push_back(w.frame.bias_level);
  if (imp.awg_quantize) {
    for (auto& s : symbols) s = quantize_level(s, spec.awg_bits);
  }

  const auto sps = static_cast<std::size_t>(spec.samples_per_symbol);
  w.samples.reserve(symbols.size() * sps);
  for (double s : symbols) w.samples.insert(w.samples.end(), sps, s);

  if (imp.bandwidth_filter) {
    const double alpha =
        1.0 - std::exp(-2.0 * std::numbers::pi * spec.analog_bandwidth_hz / spec.sample_rate_hz);
    double state = 0.0;
    for (auto& s : w.samples) {
      state += alpha * (s - state);
      s = state;
    }
  }
  return w;
}

OpticalChannels broadcast_modulate(const ElectricalWaveform& waveform,
                                   const photonics::ShapedComb& comb) {
  OpticalChannels out;
  out.sample_rate_hz = waveform.sample_rate_hz;
  out.frame = waveform.frame;
  out.envelopes.resize(comb.n_lines());
  for (std::size_t k = 0; k < comb.n_lines(); ++k) {
    const double p = comb.line_powers_linear[k];
    auto& env = out.envelopes[k];
    env.resize(waveform.samples.size());
    for (std::size_t i = 0; i < env.size(); ++i) env[i] = p * waveform.samples[i];
  }
  const std::size_t pad_start = waveform.frame.slot_start(waveform.frame.n_data_symbols);
  out.reference_path.assign(waveform.samples.begin() + static_cast<std::ptrdiff_t>(pad_start),
                            waveform.samples.end());
  return out;
}

double dispersion_delay_step_ps(const FiberSpec& fiber, double fsr_hz, double wavelength_nm) {
  const double lambda_m = wavelength_nm * 1e-9;
  const double spacing_nm = fsr_hz * lambda_m * lambda_m / kSpeedOfLight * 1e9;
  return fiber.dispersion_ps_per_nm_km * fiber.length_km * spacing_nm;
}

double channel_delay_ps(std::size_t k, std::size_t n, const WaveformSpec& spec,
                        const FiberSpec& fiber, double fsr_hz, double wavelength_nm) {
  if (k < 1 || k > n) {
    throw Error(ErrorCode::kIndex,
                "channel " + std::to_string(k) + " outside 1.." + std::to_string(n));
  }
  const double steps = static_cast<double>(n - k);
  if (fiber.delay_mode == DelayMode::kNominalTau) return steps * spec.symbol_duration_s() * 1e12;
  return steps * dispersion_delay_step_ps(fiber, fsr_hz, wavelength_nm);
}

std::vector<double> channel_delays_ps(std::size_t n, const WaveformSpec& spec,
                                      const FiberSpec& fiber, std::uint64_t seed, double fsr_hz,
                                      double wavelength_nm) {
  std::vector<double> out(n);
  const double step = fiber.delay_mode == DelayMode::kNominalTau
                          ? spec.symbol_duration_s() * 1e12
                          : dispersion_delay_step_ps(fiber, fsr_hz, wavelength_nm);
  for (std::size_t k = 1; k <= n; ++k) out[k - 1] = static_cast<double>(n - k) * step;
  if (fiber.delay_jitter_ps_sigma > 0) {
    Rng rng(mix_seed(seed ^ kJitterStream));
    std::normal_distribution<double> jitter(0.0, fiber.delay_jitter_ps_sigma);
    for (auto& d : out) d += jitter(rng);
  }
  return out;
}

double fiber_time_of_flight_s(const FiberSpec& fiber, double group_index) {
  return fiber.length_km * 1e3 * group_index / kSpeedOfLight;
}

DelayedChannels apply_delays(OpticalChannels channels, std::vector<double> delays_ps) {
  if (delays_ps.size() != channels.envelopes.size()) {
    throw Error(ErrorCode::kShape, std::to_string(delays_ps.size()) + " delays for " +
                                       std::to_string(channels.envelopes.size()) + " channels");
  }
  return DelayedChannels{std::move(channels), std::move(delays_ps)};
}

ElectricalWaveform photodetect(const DelayedChannels& delayed, const ImpairmentConfig& imp,
                               std::uint64_t noise_seed) {
  const auto& ch = delayed.channels;
  const std::size_t n = ch.frame.n_data_symbols;
  if (n == 0) throw Error(ErrorCode::kShape, "frame has no data symbols");
  if (ch.envelopes.size() != n) {
    throw Error(ErrorCode::kShape, std::to_string(ch.envelopes.size()) + " channels for " +
                                       std::to_string(n) + " data symbols");
  }

  ElectricalWaveform out;
  out.sample_rate_hz = ch.sample_rate_hz;
  out.frame = ch.frame;
  out.frame.kind = FrameKind::kDetected;
  const std::size_t corr_samples = out.frame.slot_start(out.frame.leading_slots());
  const auto data_samples = static_cast<std::ptrdiff_t>(ch.frame.slot_start(n));
  out.samples.assign(corr_samples, 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    const auto& env = ch.envelopes[k];
    const double shift = delay_samples(delayed.delays_ps[k], ch.sample_rate_hz);
    const double whole = std::floor(shift);
    if (whole == shift) {
      const auto offset = static_cast<std::ptrdiff_t>(whole);
      for (std::ptrdiff_t j = 0; j < data_samples; ++j) {
        const std::ptrdiff_t i = j + offset;
        if (i >= 0 && i < static_cast<std::ptrdiff_t>(corr_samples)) out.samples[i] += env[j];
      }
    } else {
      // Stepwise envelope: the value at time t is the sample at floor(t - shift).
      for (std::size_t i = 0; i < corr_samples; ++i) {
        const double src = std::floor(static_cast<double>(i) - shift);
        if (src >= 0 && src < static_cast<double>(data_samples)) {
          out.samples[i] += env[static_cast<std::size_t>(src)];
        }
      }
    }
  }
  out.samples.insert(out.samples.end(), ch.reference_path.begin(), ch.reference_path.end());

  if (std::isfinite(imp.electrical_snr_db)) {
    if (!(imp.electrical_snr_db > 0)) {
      throw Error(ErrorCode::kUsage, "electrical SNR must be positive when finite");
    }
    double power = 0.0;
    for (double s : out.samples) power += s * s;
    power /= static_cast<double>(out.samples.size());
    const double sigma = std::sqrt(power / std::pow(10.0, imp.electrical_snr_db / 10.0));
    Rng rng(mix_seed(noise_seed));
    std::normal_distribution<double> unit(0.0, 1.0);
    for (auto& s : out.samples) s = std::max(0.0, s + sigma * unit(rng));
  }
  return out;
}

PhotonicPrediction sample_and_recover(const ElectricalWaveform& detected, double weight_scale,
                                      const WaveformSpec& spec) {
  const auto& frame = detected.frame;
  if (frame.kind != FrameKind::kDetected || frame.n_data_symbols == 0) {
    throw Error(ErrorCode::kRecovery, "waveform carries no detected-frame metadata");
  }
  if (frame.samples_per_symbol != spec.samples_per_symbol) {
    throw Error(ErrorCode::kRecovery, "frame and waveform spec disagree on samples per symbol");
  }
  if (detected.samples.size() < frame.slot_start(frame.total_slots())) {
    throw Error(ErrorCode::kRecovery, "detected trace is shorter than its frame");
  }
  PhotonicPrediction p;
  p.center_value = detected.samples[frame.slot_center(frame.n_data_symbols - 1)];
  p.reference_value = detected.samples[frame.slot_center(frame.pad_slot(1))];
  if (!(p.reference_value > 0.0)) {
    throw Error(ErrorCode::kRecovery, "reference sample is not positive; cannot rescale");
  }
  const double bias_level = detected.samples[frame.slot_center(frame.pad_slot(2))] /
                            p.reference_value * frame.reference_level;
  p.dot_estimate = p.center_value / p.reference_value * frame.reference_level * weight_scale;
  p.score = p.dot_estimate + frame.bias_encoding.from_level(bias_level);
  p.cls = p.score > 0 ? 1 : 0;
  return p;
}

photonics::ShapedComb prepare_comb(const model::PerceptronModel& model,
                                   const photonics::CombSpec& comb,
                                   const photonics::ShaperConfig& shaper, std::uint64_t seed) {
  if (comb.n_lines != model.n()) {
    throw Error(ErrorCode::kShape, "comb has " + std::to_string(comb.n_lines) +
                                       " lines but the model has " + std::to_string(model.n()) +
                                       " weights");
  }
  const auto flat = photonics::flatten_comb(comb, shaper);
  auto shaped = photonics::shape_weights(flat.powers_linear_mw, model.weights, shaper);
  shaped.fsr_hz = comb.fsr_hz;
  return photonics::calibrate_comb(std::move(shaped), shaper, seed);
}

PhotonicPrediction run_perceptron(const dataset::Sample& sample,
                                  const model::PerceptronModel& model,
                                  const photonics::ShapedComb& comb, const ChainConfig& chain,
                                  std::uint64_t sample_index, bool keep_trace) {
  if (sample.features.size() != model.n() || comb.n_lines() != model.n()) {
    throw Error(ErrorCode::kShape, "sample has " + std::to_string(sample.features.size()) +
                                       " features, model " + std::to_string(model.n()) +
                                       " weights, comb " + std::to_string(comb.n_lines()) +
                                       " lines");
  }
  for (double w : model.weights) {
    if (w < 0) {
      throw Error(ErrorCode::kDomain,
                  "photonic deployment needs nonnegative weights (train with weight_mode "
                  "nonnegative)");
    }
  }
  const auto& imp = chain.impairments;
  const auto wave = encode_waveform(sample.features, model.bias, chain.waveform, imp);
  auto delays = channel_delays_ps(model.n(), chain.waveform, chain.fiber, imp.seed, comb.fsr_hz);
  const auto delayed = apply_delays(broadcast_modulate(wave, comb), std::move(delays));
  auto detected = photodetect(delayed, imp, imp.seed ^ sample_index);
  auto p = sample_and_recover(detected, comb.weight_scale, chain.waveform);
  if (keep_trace) p.raw_trace = std::move(detected);
  return p;
}

std::vector<PhotonicPrediction> run_batch(std::span<const dataset::Sample> samples,
                                          const model::PerceptronModel& model,
                                          const photonics::ShapedComb& comb,
                                          const ChainConfig& chain, unsigned threads) {
  std::vector<PhotonicPrediction> out(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    out[i] = run_perceptron(samples[i], model, comb, chain, i);
  });
  return out;
}

double snr_required_for_bits(int bits) {
  if (bits < 1) throw Error(ErrorCode::kUsage, "bit depth must be at least 1");
  return 20.0 * std::log10(std::ldexp(1.0, bits));
}

}  // namespace combnet::signalchain

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

// Broadcast-and-delay dot product, sample by sample.
//
// Frame layout (symbols, each samples_per_symbol samples long):
//
//   encoded:   x(1) ... x(N) | trigger  reference  bias
//   detected:  slot 0 ... slot 2N-2 | trigger  reference  bias
//
// Channel k (1-based) carries line power p(k) times the data symbols and is
// delayed by (N - k) symbols, so detected slot N-1 is the only slot where
// all N weighted copies overlap: sum_k p(k) x(k). The pad symbols are gated
// out of the dispersive path and reach the detector through a unit-power
// reference path, after the 2N-1 correlation slots, so they calibrate the
// detector gain without overlapping any data copy.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "combnet/dataset.hpp"
#include "combnet/model.hpp"
#include "combnet/photonics.hpp"

namespace combnet::signalchain {

inline constexpr std::size_t kPadSymbols = 3;
inline constexpr double kSpeedOfLight = 299792458.0;

struct WaveformSpec {
  double sample_rate_hz = 59.421642e9;
  int samples_per_symbol = 5;
  int awg_bits = 8;
  double analog_bandwidth_hz = 25e9;

  double symbol_duration_s() const { return samples_per_symbol / sample_rate_hz; }
};

enum class DelayMode { kNominalTau, kDispersionDerived };

const char* delay_mode_name(DelayMode mode);
DelayMode parse_delay_mode(const std::string& name);

struct FiberSpec {
  double length_km = 13.0;
  double dispersion_ps_per_nm_km = 17.0;
  DelayMode delay_mode = DelayMode::kNominalTau;
  double delay_jitter_ps_sigma = 0.0;
};

struct ImpairmentConfig {
  double electrical_snr_db = std::numeric_limits<double>::infinity();
  bool awg_quantize = true;
  bool bandwidth_filter = false;
  std::uint64_t seed = 0;
  double osnr_db = 28.0;  // recorded only

  /// Everything off: exact levels, no filter, no noise.
  static ImpairmentConfig ideal();
};

/// Affine map between the signed bias and a [0,1] AWG level.
struct BiasEncoding {
  double b_min = -1.0;
  double b_max = 1.0;

  double to_level(double bias) const { return (bias - b_min) / (b_max - b_min); }
  double from_level(double level) const { return b_min + level * (b_max - b_min); }
};

/// Symmetric range of +-2|b| (or +-1 for b == 0), so the level is 0.25 or 0.75.
BiasEncoding bias_encoding_for(double bias);

enum class FrameKind { kEncoded, kDetected };

struct FrameInfo {
  FrameKind kind = FrameKind::kEncoded;
  std::size_t n_data_symbols = 0;
  int samples_per_symbol = 1;
  double trigger_level = 1.0;
  double reference_level = 1.0;
  double bias_level = 0.5;
  BiasEncoding bias_encoding;

  /// Data or correlation slots before the pad symbols.
  std::size_t leading_slots() const {
    return kind == FrameKind::kEncoded ? n_data_symbols : 2 * n_data_symbols - 1;
  }
  std::size_t total_slots() const { return leading_slots() + kPadSymbols; }
  /// First sample of slot `slot`.
  std::size_t slot_start(std::size_t slot) const { return slot * samples_per_symbol; }
  /// Sample taken as the temporal midpoint of slot `slot`.
  std::size_t slot_center(std::size_t slot) const {
    return slot * samples_per_symbol + samples_per_symbol / 2;
  }
  std::size_t pad_slot(std::size_t pad) const { return leading_slots() + pad; }
};

struct ElectricalWaveform {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;
  FrameInfo frame;

  double time_s(std::size_t i) const { return static_cast<double>(i) / sample_rate_hz; }
};

/// Stepwise AWG waveform: data symbols then trigger, reference, bias.
ElectricalWaveform encode_waveform(std::span<const double> x, double bias,
                                   const WaveformSpec& spec, const ImpairmentConfig& imp);

/// Nearest of 2^bits uniform levels on [0,1].
double quantize_level(double level, int bits);

struct OpticalChannels {
  std::vector<std::vector<double>> envelopes;  // one per comb line, full frame
  std::vector<double> reference_path;          // pad symbols at unit line power
  double sample_rate_hz = 0.0;
  FrameInfo frame;
};

/// Intensity-modulates every comb line with the same waveform.
OpticalChannels broadcast_modulate(const ElectricalWaveform& waveform,
                                   const photonics::ShapedComb& comb);

/// Group delay of channel k (1-based) relative to channel N, without jitter.
double channel_delay_ps(std::size_t k, std::size_t n, const WaveformSpec& spec,
                        const FiberSpec& fiber, double fsr_hz = 48.9e9,
                        double wavelength_nm = 1550.0);

/// Delay step between adjacent channels in dispersion-derived mode:
/// D * L * (fsr * lambda^2 / c).
double dispersion_delay_step_ps(const FiberSpec& fiber, double fsr_hz, double wavelength_nm);

/// All N channel delays, including per-channel Gaussian jitter drawn under
/// `seed` when fiber.delay_jitter_ps_sigma > 0.
std::vector<double> channel_delays_ps(std::size_t n, const WaveformSpec& spec,
                                      const FiberSpec& fiber, std::uint64_t seed,
                                      double fsr_hz = 48.9e9, double wavelength_nm = 1550.0);

/// Group delay through the fibre for light at `group_index`; the latency a
/// spool adds regardless of throughput.
double fiber_time_of_flight_s(const FiberSpec& fiber, double group_index = 1.468);

struct DelayedChannels {
  OpticalChannels channels;
  std::vector<double> delays_ps;
};

DelayedChannels apply_delays(OpticalChannels channels, std::vector<double> delays_ps);

/// Square-law detection summed over channels on the common sample grid,
/// followed by the reference-path pad symbols. With a finite SNR, white
/// Gaussian noise of variance mean(signal^2) / 10^(snr/10) is added and the
/// result clamped at 0. `noise_seed` selects the noise stream.
ElectricalWaveform photodetect(const DelayedChannels& delayed, const ImpairmentConfig& imp,
                               std::uint64_t noise_seed);

struct PhotonicPrediction {
  double dot_estimate = 0.0;
  double score = 0.0;
  int cls = 0;
  double center_value = 0.0;
  double reference_value = 0.0;
  std::optional<ElectricalWaveform> raw_trace;
};

/// Samples the full-overlap slot and the pad symbols, rescales by the
/// reference level and `weight_scale`, and adds the recovered bias.
PhotonicPrediction sample_and_recover(const ElectricalWaveform& detected, double weight_scale,
                                      const WaveformSpec& spec);

/// Stage-one flattening, stage-two weight shaping and the calibration loop
/// for a model's (nonnegative) weights.
photonics::ShapedComb prepare_comb(const model::PerceptronModel& model,
                                   const photonics::CombSpec& comb,
                                   const photonics::ShaperConfig& shaper, std::uint64_t seed);

struct ChainConfig {
  WaveformSpec waveform;
  FiberSpec fiber;
  ImpairmentConfig impairments;
};

/// encode -> broadcast -> delay -> detect -> recover for one sample. The
/// noise stream is derived from (impairments.seed, sample_index).
PhotonicPrediction run_perceptron(const dataset::Sample& sample,
                                  const model::PerceptronModel& model,
                                  const photonics::ShapedComb& comb, const ChainConfig& chain,
                                  std::uint64_t sample_index, bool keep_trace = false);

/// run_perceptron over a batch; results are in sample order and independent
/// of `threads`.
std::vector<PhotonicPrediction> run_batch(std::span<const dataset::Sample> samples,
                                          const model::PerceptronModel& model,
                                          const photonics::ShapedComb& comb,
                                          const ChainConfig& chain, unsigned threads = 1);

/// 20 log10(2^bits): electrical SNR needed to resolve `bits` of intensity.
double snr_required_for_bits(int bits);

}  // namespace combnet::signalchain

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

// Comb source and the two-stage spectral shaper that writes a weight vector
// onto comb-line powers. The comb is an ideal set of CW lines; only the line
// powers matter downstream.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace combnet::photonics {

struct CombSpec {
  std::size_t n_lines = 49;
  double fsr_hz = 48.9e9;
  double center_wavelength_nm = 1550.0;
  std::vector<double> raw_line_powers_dbm;  // empty means flat at 0 dBm

  /// Raw powers, expanded to n_lines entries.
  std::vector<double> line_powers_dbm() const;
};

/// Flat comb at `power_dbm` per line.
CombSpec flat_comb(std::size_t n_lines, double power_dbm = 0.0);

/// sech^2 spectral envelope centred on the middle line; `width_lines` is the
/// half-width in lines where the envelope falls to sech^2(1).
CombSpec sech2_comb(std::size_t n_lines, double peak_dbm, double width_lines);

struct ShaperConfig {
  double attenuation_range_db = 35.0;
  double measurement_noise_sigma_db = 0.05;
  double loss_error_sigma_db = 0.2;
  double tolerance_db = 0.1;
  int max_iterations = 8;
  // Uniform linear quantization at effective_weight_bits(range) levels.
  bool quantize = true;
  // Clamp lines below max * 10^(-range/10) to zero.
  bool apply_floor = true;
  // Recorded only; a static-weight simulation never reconfigures.
  double reconfiguration_time_s = 0.5;
  double resolution_hz = 1e9;

  /// Exact shaping: no floor, no quantization, error-free feedback loop.
  static ShaperConfig ideal();
};

struct FlattenedComb {
  std::vector<double> powers_linear_mw;  // every entry equal to the weakest raw line
  std::vector<double> attenuation_db;    // applied per line
};

/// First shaper stage: attenuate every line down to the weakest one.
/// Throws kUnflattenable if a line sits more than the attenuation range
/// below the strongest line.
FlattenedComb flatten_comb(const CombSpec& comb, const ShaperConfig& shaper);

struct ShapedComb {
  std::vector<double> line_powers_linear;  // max = 1 for a nonzero weight vector
  std::vector<double> target_weights;
  double weight_scale = 0.0;  // largest weight before normalization
  int calibration_iterations = 0;
  bool calibration_converged = false;
  double fsr_hz = 48.9e9;

  std::size_t n_lines() const { return line_powers_linear.size(); }
};

/// floor(range_db / (10 log10 2)).
int effective_weight_bits(double attenuation_range_db);

/// Second shaper stage: line k power proportional to weights[k], normalized
/// to max 1, then floor-clamped and quantized per `shaper`. The flattened
/// comb must be flat (equal line powers).
ShapedComb shape_weights(std::span<const double> flat_powers, std::span<const double> weights,
                         const ShaperConfig& shaper);

struct CalibrationResult {
  std::vector<double> achieved_powers;
  int iterations = 0;
  bool converged = false;
  // Per iteration, over lines with nonzero target: max and mean |error| in dB
  // of the powers applied in that iteration.
  std::vector<double> max_abs_error_db;
  std::vector<double> mean_abs_error_db;
};

/// Feedback loop around a shaper with a static per-line loss error. Each
/// iteration applies the current command, checks the achieved error against
/// the tolerance, then measures through a noisy spectrum analyser and
/// refines the per-line loss estimate as the running mean of all
/// measurements. Deterministic under `rng_seed`.
CalibrationResult calibrate(std::span<const double> target_powers, const ShaperConfig& shaper,
                            std::uint64_t rng_seed);

/// Runs calibrate() on the comb's lines and stores the achieved powers.
ShapedComb calibrate_comb(ShapedComb comb, const ShaperConfig& shaper, std::uint64_t rng_seed);

}  // namespace combnet::photonics

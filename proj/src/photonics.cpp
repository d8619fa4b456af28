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
#include "combnet/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "combnet/error.hpp"
#include "combnet/runtime.hpp"

namespace combnet::photonics {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

std::vector<double> CombSpec::line_powers_dbm() const {
  if (raw_line_powers_dbm.empty()) return std::vector<double>(n_lines, 0.0);
  if (raw_line_powers_dbm.size() != n_lines) {
    throw Error(ErrorCode::kShape, "comb has " + std::to_string(n_lines) + " lines but " +
                                       std::to_string(raw_line_powers_dbm.size()) +
                                       " raw powers");
  }
  return raw_line_powers_dbm;
}

CombSpec flat_comb(std::size_t n_lines, double power_dbm) {
  CombSpec c;
  c.n_lines = n_lines;
  c.raw_line_powers_dbm.assign(n_lines, power_dbm);
  return c;
}

CombSpec sech2_comb(std::size_t n_lines, double peak_dbm, double width_lines) {
  CombSpec c;
  c.n_lines = n_lines;
  c.raw_line_powers_dbm.resize(n_lines);
  const double centre = (static_cast<double>(n_lines) - 1.0) / 2.0;
  for (std::size_t k = 0; k < n_lines; ++k) {
    const double s = 1.0 / std::cosh((static_cast<double>(k) - centre) / width_lines);
    c.raw_line_powers_dbm[k] = peak_dbm + 10.0 * std::log10(s * s);
  }
  return c;
}

ShaperConfig ShaperConfig::ideal() {
  ShaperConfig s;
  s.measurement_noise_sigma_db = 0.0;
  s.loss_error_sigma_db = 0.0;
  s.quantize = false;
  s.apply_floor = false;
  return s;
}

FlattenedComb flatten_comb(const CombSpec& comb, const ShaperConfig& shaper) {
  if (comb.n_lines < 1) throw Error(ErrorCode::kShape, "comb has no lines");
  const auto dbm = comb.line_powers_dbm();
  for (double p : dbm) {
    if (!std::isfinite(p)) throw Error(ErrorCode::kDomain, "raw comb power is not finite");
  }
  const double peak = *std::max_element(dbm.begin(), dbm.end());
  const double weakest = *std::min_element(dbm.begin(), dbm.end());

  std::string bad;
  for (std::size_t k = 0; k < dbm.size(); ++k) {
    if (peak - dbm[k] > shaper.attenuation_range_db) {
      bad += (bad.empty() ? "" : ",") + std::to_string(k);
    }
  }
  if (!bad.empty()) {
    throw Error(ErrorCode::kUnflattenable,
                "lines [" + bad + "] are more than " +
                    std::to_string(shaper.attenuation_range_db) + " dB below the peak line");
  }

  FlattenedComb out;
  out.powers_linear_mw.assign(dbm.size(), db_to_linear(weakest));
  out.attenuation_db.resize(dbm.size());
  for (std::size_t k = 0; k < dbm.size(); ++k) out.attenuation_db[k] = dbm[k] - weakest;
  return out;
}

int effective_weight_bits(double attenuation_range_db) {
  return static_cast<int>(std::floor(attenuation_range_db / (10.0 * std::log10(2.0))));
}

ShapedComb shape_weights(std::span<const double> flat_powers, std::span<const double> weights,
                         const ShaperConfig& shaper) {
  if (weights.size() != flat_powers.size()) {
    throw Error(ErrorCode::kShape, std::to_string(weights.size()) + " weights for " +
                                       std::to_string(flat_powers.size()) + " comb lines");
  }
  if (weights.empty()) throw Error(ErrorCode::kShape, "no comb lines to shape");
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] >= 0.0) || !std::isfinite(weights[k])) {
      throw Error(ErrorCode::kDomain, "weight " + std::to_string(k) +
                                          " is negative or not finite; only intensities >= 0 "
                                          "can be written onto comb lines");
    }
    if (std::abs(flat_powers[k] - flat_powers[0]) > 1e-9 * std::abs(flat_powers[0])) {
      throw Error(ErrorCode::kDomain, "comb is not flat at line " + std::to_string(k));
    }
  }

  ShapedComb out;
  out.target_weights.assign(weights.begin(), weights.end());
  out.line_powers_linear.assign(weights.size(), 0.0);
  out.weight_scale = *std::max_element(weights.begin(), weights.end());
  if (out.weight_scale == 0.0) return out;

  const double floor = std::pow(10.0, -shaper.attenuation_range_db / 10.0);
  const int bits = effective_weight_bits(shaper.attenuation_range_db);
  const double levels = std::ldexp(1.0, bits);
  const double step = (1.0 - floor) / (levels - 1.0);

  for (std::size_t k = 0; k < weights.size(); ++k) {
    double p = weights[k] / out.weight_scale;
    if (shaper.apply_floor && p < floor) {
      p = 0.0;
    } else if (shaper.quantize && p > 0.0 && bits >= 1) {
      p = floor + std::round((p - floor) / step) * step;
      p = std::clamp(p, 0.0, 1.0);
    }
    out.line_powers_linear[k] = p;
  }
  return out;
}

CalibrationResult calibrate(std::span<const double> target_powers, const ShaperConfig& shaper,
                            std::uint64_t rng_seed) {
  for (double t : target_powers) {
    if (!(t >= 0.0)) throw Error(ErrorCode::kDomain, "calibration target is negative");
  }
  const std::size_t n = target_powers.size();
  Rng rng(rng_seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  // Static loss-characteristic error of the shaper, per line, in dB.
  std::vector<double> loss_error(n, 0.0);
  if (shaper.loss_error_sigma_db > 0) {
    for (auto& e : loss_error) e = shaper.loss_error_sigma_db * unit(rng);
  }

  std::vector<double> estimate(n, 0.0);     // running estimate of loss_error
  std::vector<double> sample_sum(n, 0.0);   // sum of measured loss samples
  CalibrationResult out;
  out.achieved_powers.assign(n, 0.0);
  const int max_iter = std::max(1, shaper.max_iterations);

  for (int it = 1; it <= max_iter; ++it) {
    double max_err = 0.0, sum_err = 0.0;
    std::size_t active = 0;
    std::vector<double> applied_error(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (target_powers[k] == 0.0) {
        out.achieved_powers[k] = 0.0;
        continue;
      }
      applied_error[k] = loss_error[k] - estimate[k];
      out.achieved_powers[k] = target_powers[k] * db_to_linear(applied_error[k]);
      max_err = std::max(max_err, std::abs(applied_error[k]));
      sum_err += std::abs(applied_error[k]);
      ++active;
    }
    out.iterations = it;
    out.max_abs_error_db.push_back(max_err);
    out.mean_abs_error_db.push_back(active ? sum_err / static_cast<double>(active) : 0.0);
    if (max_err <= shaper.tolerance_db) {
      out.converged = true;
      break;
    }
    // Spectrum-analyser readback: error of this iteration plus fresh noise.
    for (std::size_t k = 0; k < n; ++k) {
      if (target_powers[k] == 0.0) continue;
      double measured = applied_error[k];
      if (shaper.measurement_noise_sigma_db > 0) {
        measured += shaper.measurement_noise_sigma_db * unit(rng);
      }
      sample_sum[k] += measured + estimate[k];
      estimate[k] = sample_sum[k] / it;
    }
  }
  return out;
}

ShapedComb calibrate_comb(ShapedComb comb, const ShaperConfig& shaper, std::uint64_t rng_seed) {
  auto result = calibrate(comb.line_powers_linear, shaper, rng_seed);
  comb.line_powers_linear = std::move(result.achieved_powers);
  comb.calibration_iterations = result.iterations;
  comb.calibration_converged = result.converged;
  return comb;
}

}  // namespace combnet::photonics

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
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "combnet/photonics.hpp"
#include "helpers.hpp"

using namespace combnet;
using namespace combnet::photonics;

TEST_CASE("comb profiles") {
  const auto flat = flat_comb(49, -3.0);
  CHECK(flat.line_powers_dbm() == std::vector<double>(49, -3.0));
  CombSpec defaulted;
  CHECK(defaulted.line_powers_dbm() == std::vector<double>(49, 0.0));
  const auto s = sech2_comb(49, 0.0, 20.0);
  const auto dbm = s.line_powers_dbm();
  CHECK(dbm[24] == doctest::Approx(0.0));
  CHECK(dbm[0] < dbm[12]);
  CHECK(dbm[0] == doctest::Approx(dbm[48]));
}

TEST_CASE("flatten_comb equalizes to the weakest line") {
  ShaperConfig sh;
  const auto same = flatten_comb(flat_comb(5, 2.0), sh);
  for (double a : same.attenuation_db) CHECK(a == 0.0);
  for (double p : same.powers_linear_mw) CHECK(p == doctest::Approx(std::pow(10.0, 0.2)));

  CombSpec two;
  two.n_lines = 2;
  two.raw_line_powers_dbm = {0.0, 3.0};
  const auto f = flatten_comb(two, sh);
  CHECK(f.powers_linear_mw[0] == doctest::Approx(1.0));
  CHECK(f.powers_linear_mw[1] == doctest::Approx(1.0));
  CHECK(f.attenuation_db[1] == doctest::Approx(3.0));
}

TEST_CASE("flatten_comb names lines beyond the attenuation range") {
  CombSpec c;
  c.n_lines = 4;
  c.raw_line_powers_dbm = {0.0, -10.0, -40.0, -5.0};
  ShaperConfig sh;
  CHECK(testutil::error_code_of([&] { flatten_comb(c, sh); }) == ErrorCode::kUnflattenable);
  const auto msg = testutil::error_message_of([&] { flatten_comb(c, sh); });
  CHECK(msg.find("[2]") != std::string::npos);

  // a structured comb within range flattens
  CHECK_NOTHROW(flatten_comb(sech2_comb(49, 0.0, 20.0), sh));
}

TEST_CASE("effective_weight_bits") {
  CHECK(effective_weight_bits(35.0) == 11);
  CHECK(effective_weight_bits(3.0103) == 1);
  CHECK(effective_weight_bits(30.103) == 10);
  CHECK(10.0 * std::log10(std::ldexp(1.0, 11)) == doctest::Approx(33.11).epsilon(1e-3));
}

TEST_CASE("shape_weights examples") {
  ShaperConfig sh;
  const std::vector<double> flat(4, 1.0);
  const auto uniform = shape_weights(flat, std::vector<double>{2.0, 2.0, 2.0, 2.0}, sh);
  for (double p : uniform.line_powers_linear) CHECK(p == 1.0);
  CHECK(uniform.weight_scale == 2.0);

  const auto one_zero = shape_weights(flat, std::vector<double>{0.3, 0.0, 0.7, 0.1}, sh);
  CHECK(one_zero.line_powers_linear[1] == 0.0);

  const std::vector<double> two(2, 1.0);
  const auto clamped = shape_weights(two, std::vector<double>{1.0, 1e-4}, sh);
  CHECK(clamped.line_powers_linear[0] == 1.0);
  CHECK(clamped.line_powers_linear[1] == 0.0);

  CHECK(testutil::error_code_of([&] { shape_weights(two, std::vector<double>{1.0, -0.1}, sh); }) ==
        ErrorCode::kDomain);
  CHECK(testutil::error_code_of([&] { shape_weights(two, std::vector<double>{1.0}, sh); }) ==
        ErrorCode::kShape);
  CHECK(testutil::error_code_of([&] {
          shape_weights(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 1.0}, sh);
        }) == ErrorCode::kDomain);

  const auto zeros = shape_weights(two, std::vector<double>{0.0, 0.0}, sh);
  CHECK(zeros.line_powers_linear == std::vector<double>{0.0, 0.0});
}

TEST_CASE("shaped powers are nonnegative, max 1, floor-clamped and within half an LSB") {
  ShaperConfig sh;
  const double floor = std::pow(10.0, -sh.attenuation_range_db / 10.0);
  const double lsb = (1.0 - floor) / (std::ldexp(1.0, effective_weight_bits(sh.attenuation_range_db)) - 1.0);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> logw(-5.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(49);
    for (auto& v : w) v = std::pow(10.0, logw(rng));
    const auto s = shape_weights(std::vector<double>(49, 1.0), w, sh);
    const double wmax = *std::max_element(w.begin(), w.end());
    CHECK(*std::max_element(s.line_powers_linear.begin(), s.line_powers_linear.end()) == 1.0);
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double ideal = w[k] / wmax;
      const double p = s.line_powers_linear[k];
      CHECK(p >= 0.0);
      if (ideal < floor) {
        CHECK(p == 0.0);
      } else {
        CHECK(std::abs(p - ideal) <= 0.5 * lsb * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("shape_weights is invariant to positive rescaling") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (const auto& sh : {ShaperConfig{}, ShaperConfig::ideal()}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto w = testutil::random_unit_vector(rng, 20);
      std::vector<double> cw(w);
      const double c = scale(rng);
      for (auto& v : cw) v *= c;
      const auto a = shape_weights(std::vector<double>(20, 1.0), w, sh);
      const auto b = shape_weights(std::vector<double>(20, 1.0), cw, sh);
      for (std::size_t k = 0; k < 20; ++k) {
        CHECK(a.line_powers_linear[k] == doctest::Approx(b.line_powers_linear[k]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("ideal calibration is exact in one iteration") {
  const std::vector<double> targets = {1.0, 0.5, 0.0, 0.25};
  const auto r = calibrate(targets, ShaperConfig::ideal(), 3);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.achieved_powers == targets);
}

TEST_CASE("unattainable tolerance runs to max iterations") {
  ShaperConfig sh;
  sh.tolerance_db = 0.0;
  const auto r = calibrate(std::vector<double>(49, 0.5), sh, 5);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == sh.max_iterations);
}

TEST_CASE("calibration converges at default noise on at least 99 of 100 seeds") {
  ShaperConfig sh;
  int converged = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = calibrate(std::vector<double>(49, 0.5), sh, seed);
    if (r.converged && r.iterations <= 8 && r.max_abs_error_db.back() <= 0.1) ++converged;
  }
  CHECK(converged >= 99);
}

TEST_CASE("calibration error decreases in expectation") {
  ShaperConfig sh;
  sh.tolerance_db = 0.0;  // run every iteration
  std::vector<double> mean_err(static_cast<std::size_t>(sh.max_iterations), 0.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = calibrate(std::vector<double>(49, 0.5), sh, seed);
    REQUIRE(r.mean_abs_error_db.size() == mean_err.size());
    for (std::size_t i = 0; i < mean_err.size(); ++i) mean_err[i] += r.mean_abs_error_db[i] / 100.0;
  }
  for (std::size_t i = 1; i < mean_err.size(); ++i) CHECK(mean_err[i] <= mean_err[i - 1]);
}

TEST_CASE("calibration is deterministic and keeps zero lines dark") {
  ShaperConfig sh;
  const std::vector<double> t = {1.0, 0.0, 0.3};
  const auto a = calibrate(t, sh, 77);
  const auto b = calibrate(t, sh, 77);
  CHECK(a.achieved_powers == b.achieved_powers);
  CHECK(a.iterations == b.iterations);
  CHECK(a.achieved_powers[1] == 0.0);
  for (double p : a.achieved_powers) CHECK(p >= 0.0);
  CHECK(testutil::error_code_of([] { calibrate(std::vector<double>{-1.0}, ShaperConfig{}, 0); }) ==
        ErrorCode::kDomain);
}

TEST_CASE("calibrate_comb stores the loop outcome") {
  auto shaped = shape_weights(std::vector<double>(3, 1.0), std::vector<double>{1.0, 0.5, 0.25},
                              ShaperConfig::ideal());
  const auto c = calibrate_comb(shaped, ShaperConfig::ideal(), 0);
  CHECK(c.calibration_converged);
  CHECK(c.calibration_iterations == 1);
  CHECK(c.line_powers_linear == shaped.line_powers_linear);
}

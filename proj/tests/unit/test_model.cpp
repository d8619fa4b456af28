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

#include <cmath>
#include <random>

#include "combnet/model.hpp"
#include "helpers.hpp"

using namespace combnet;
using namespace combnet::model;
using dataset::Sample;

namespace {

std::vector<Sample> random_samples(std::mt19937_64& rng, std::size_t count, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  std::vector<Sample> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].features = testutil::random_unit_vector(rng, n);
    out[i].label = coin(rng) ? 1 : 0;
    out[i].id = i;
  }
  return out;
}

// Independent cross-entropy, written directly from the definition.
double reference_loss(const std::vector<Sample>& s, const std::vector<double>& w, double b) {
  double total = 0.0;
  for (const auto& x : s) {
    double z = b;
    for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * x.features[k];
    const double p = 1.0 / (1.0 + std::exp(-z));
    total += x.label ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(s.size());
}

}  // namespace

TEST_CASE("sigmoid anchors") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));
  for (double z : {0.1, 1.0, 7.5, 40.0, 700.0}) CHECK(sigmoid(z) + sigmoid(-z) == doctest::Approx(1.0));
  CHECK(std::isfinite(sigmoid(-1000.0)));
  CHECK(sigmoid(-1000.0) >= 0.0);
}

TEST_CASE("loss matches the definition") {
  std::mt19937_64 rng(3);
  const auto s = random_samples(rng, 20, 6);
  const auto w = testutil::random_unit_vector(rng, 6);
  CHECK(loss_and_gradient(s, w, -0.3).loss == doctest::Approx(reference_loss(s, w, -0.3)).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> dim(1, 10);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = dim(rng);
    const auto s = random_samples(rng, 20, n);
    std::vector<double> w(n);
    for (auto& v : w) v = gauss(rng);
    const double b = gauss(rng);
    const auto g = loss_and_gradient(s, w, b);
    const double h = 1e-6;
    for (std::size_t k = 0; k <= n; ++k) {
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (k < n) {
        wp[k] += h;
        wm[k] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double numeric = (loss_and_gradient(s, wp, bp).loss - loss_and_gradient(s, wm, bm).loss) / (2 * h);
      const double analytic = k < n ? g.grad_weights[k] : g.grad_bias;
      const double scale = std::max(std::abs(analytic), std::abs(numeric));
      if (scale < 1e-8) continue;
      CHECK(std::abs(analytic - numeric) / scale <= 1e-5);
    }
  }
}

TEST_CASE("training separates a linearly separable toy set") {
  std::mt19937_64 rng(23);
  dataset::DatasetSplit split;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (split.train.size() < 200) {
    Sample s;
    s.features = {u(rng), u(rng)};
    if (std::abs(s.features[0] - s.features[1]) < 0.05) continue;  // margin
    s.label = s.features[0] > s.features[1] ? 1 : 0;
    s.id = split.train.size();
    split.train.push_back(s);
  }
  // brute force: some line through the origin x1 - x2 = 0 separates the data
  for (const auto& s : split.train) CHECK((s.features[0] - s.features[1] > 0) == (s.label == 1));

  TrainConfig cfg;
  cfg.weight_mode = WeightMode::kUnconstrained;
  cfg.epochs = 5000;
  cfg.learning_rate = 2.0;
  const auto m = train(split, cfg);
  CHECK(evaluate(m, split.train).accuracy == 1.0);
}

TEST_CASE("zero epochs leave the initialization") {
  dataset::DatasetSplit split;
  split.train = {{{0.1, 0.2, 0.3}, 1, 0}, {{0.3, 0.2, 0.1}, 0, 1}};
  TrainConfig cfg;
  cfg.epochs = 0;
  cfg.seed = 9;
  const auto m = train(split, cfg);
  CHECK(m.bias == 0.0);
  REQUIRE(m.n() == 3);
  for (double w : m.weights) CHECK((w >= 0.0 && w <= cfg.init_scale));
  const auto again = train(split, cfg);
  CHECK(again.weights == m.weights);
}

TEST_CASE("nonnegative projection holds after every epoch") {
  std::mt19937_64 rng(29);
  dataset::DatasetSplit split;
  split.train = random_samples(rng, 40, 8);
  // features anti-correlated with the label push weights negative
  for (auto& s : split.train)
    for (auto& f : s.features) f = s.label ? f * 0.2 : 0.8 + 0.2 * f;
  TrainConfig cfg;
  cfg.epochs = 200;
  int observed = 0;
  bool all_nonnegative = true;
  const auto m = train(split, cfg, [&](int, const PerceptronModel& mid) {
    ++observed;
    for (double w : mid.weights) all_nonnegative = all_nonnegative && w >= 0.0;
  });
  CHECK(observed == cfg.epochs);
  CHECK(all_nonnegative);

  cfg.weight_mode = WeightMode::kUnconstrained;
  const auto free = train(split, cfg);
  bool any_negative = false;
  for (double w : free.weights) any_negative = any_negative || w < 0.0;
  CHECK(any_negative);
}

TEST_CASE("training rejects ragged features and divergence") {
  dataset::DatasetSplit split;
  split.train = {{{0.1, 0.2}, 1, 0}, {{0.3}, 0, 1}};
  CHECK(testutil::error_code_of([&] { train(split, TrainConfig{}); }) == ErrorCode::kShape);

  // initial weights near DBL_MAX overflow the first logit
  const std::vector<double> ones(10, 1.0);
  split.train = {{ones, 1, 0}, {ones, 0, 1}};
  TrainConfig cfg;
  cfg.init_scale = 1e308;
  cfg.epochs = 5;
  const auto msg = testutil::error_message_of([&] { train(split, cfg); });
  CHECK(msg.find("epoch") != std::string::npos);
  CHECK(testutil::error_code_of([&] { train(split, cfg); }) == ErrorCode::kDivergence);
}

TEST_CASE("training is deterministic under seed") {
  std::mt19937_64 rng(31);
  dataset::DatasetSplit split;
  split.train = random_samples(rng, 50, 5);
  TrainConfig cfg;
  cfg.epochs = 100;
  const auto a = train(split, cfg);
  const auto b = train(split, cfg);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
}

TEST_CASE("predict_digital examples") {
  PerceptronModel zero{{0.0, 0.0, 0.0}, -0.7};
  CHECK(predict_digital(zero, {{0.4, 0.5, 0.6}, 0, 0}).score == -0.7);
  PerceptronModel m{{0.5, 0.25, 2.0}, 0.125};
  CHECK(predict_digital(m, {{0.0, 0.0, 0.0}, 0, 0}).score == 0.125);

  PerceptronModel tie{{1.0}, -0.5};
  const auto p = predict_digital(tie, {{0.5}, 1, 0});
  CHECK(p.score == 0.0);
  CHECK(p.cls == 0);

  CHECK(testutil::error_code_of([&] { predict_digital(m, {{0.1}, 0, 0}); }) == ErrorCode::kShape);
}

TEST_CASE("predict_digital matches an independent dot product") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    PerceptronModel m;
    m.weights.resize(49);
    for (auto& w : m.weights) w = gauss(rng);
    m.bias = gauss(rng);
    Sample s{testutil::random_unit_vector(rng, 49), 0, 0};
    double ref = 0.0;
    for (std::size_t k = 49; k-- > 0;) ref += m.weights[k] * s.features[k];
    ref += m.bias;
    const auto p = predict_digital(m, s);
    CHECK(std::abs(p.score - ref) <= 1e-12);
    CHECK(p.cls == (sigmoid(p.score) > 0.5 ? 1 : 0));
  }
}

TEST_CASE("evaluate accuracy and confusion") {
  PerceptronModel always_one{{0.0}, 1.0};
  std::vector<Sample> balanced = {{{0.0}, 1, 0}, {{0.0}, 0, 1}, {{0.0}, 1, 2}, {{0.0}, 0, 3}};
  const auto ev = evaluate(always_one, balanced);
  CHECK(ev.accuracy == 0.5);
  CHECK(ev.total() == 4);
  CHECK(ev.confusion[0][1] == 2);
  CHECK(ev.confusion[1][1] == 2);

  PerceptronModel ident{{1.0}, -0.5};
  std::vector<Sample> easy = {{{1.0}, 1, 0}, {{0.0}, 0, 1}};
  CHECK(evaluate(ident, easy).accuracy == 1.0);

  CHECK(testutil::error_code_of([&] { evaluate(ident, std::vector<Sample>{}); }) == ErrorCode::kEmptyInput);
}

TEST_CASE("evaluate is independent of thread count and sample order") {
  std::mt19937_64 rng(41);
  const auto s = random_samples(rng, 97, 4);
  PerceptronModel m{{0.3, -0.2, 0.5, 0.1}, -0.2};
  const auto one = evaluate(m, s, 1);
  const auto four = evaluate(m, s, 4);
  CHECK(one.accuracy == four.accuracy);
  CHECK(one.confusion == four.confusion);
  auto reversed = s;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(evaluate(m, reversed).confusion == one.confusion);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(predict_digital(m, s[i]).score == predict_digital(m, reversed[s.size() - 1 - i]).score);
  }
}

TEST_CASE("weight mode names round-trip") {
  CHECK(parse_weight_mode(weight_mode_name(WeightMode::kNonnegative)) == WeightMode::kNonnegative);
  CHECK(parse_weight_mode(weight_mode_name(WeightMode::kUnconstrained)) == WeightMode::kUnconstrained);
  CHECK(testutil::error_code_of([] { parse_weight_mode("signed"); }) == ErrorCode::kUsage);
}

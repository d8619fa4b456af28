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
#include "combnet/model.hpp"

#include <cmath>
#include <random>

#include "combnet/error.hpp"
#include "combnet/runtime.hpp"

namespace combnet::model {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void check_shapes(std::span<const dataset::Sample> samples, std::size_t n) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].features.size() != n) {
      throw Error(ErrorCode::kShape, "sample " + std::to_string(i) + " has " +
                                         std::to_string(samples[i].features.size()) +
                                         " features, expected " + std::to_string(n));
    }
  }
}

}  // namespace

const char* weight_mode_name(WeightMode mode) {
  return mode == WeightMode::kNonnegative ? "nonnegative" : "unconstrained";
}

WeightMode parse_weight_mode(const std::string& name) {
  if (name == "nonnegative") return WeightMode::kNonnegative;
  if (name == "unconstrained") return WeightMode::kUnconstrained;
  throw Error(ErrorCode::kUsage,
              "unknown weight_mode '" + name + "' (expected nonnegative|unconstrained)");
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LossGradient loss_and_gradient(std::span<const dataset::Sample> samples,
                               std::span<const double> weights, double bias) {
  check_shapes(samples, weights.size());
  LossGradient out;
  out.grad_weights.assign(weights.size(), 0.0);
  if (samples.empty()) return out;
  for (const auto& s : samples) {
    double z = bias;
    for (std::size_t k = 0; k < weights.size(); ++k) z += weights[k] * s.features[k];
    // -[y log p + (1-y) log(1-p)] = softplus(z) - y z
    out.loss += softplus(z) - s.label * z;
    const double residual = sigmoid(z) - s.label;
    for (std::size_t k = 0; k < weights.size(); ++k) out.grad_weights[k] += residual * s.features[k];
    out.grad_bias += residual;
  }
  const double inv = 1.0 / static_cast<double>(samples.size());
  out.loss *= inv;
  for (auto& g : out.grad_weights) g *= inv;
  out.grad_bias *= inv;
  return out;
}

PerceptronModel train(const dataset::DatasetSplit& split, const TrainConfig& cfg,
                      const EpochObserver& observer) {
  if (split.train.empty()) throw Error(ErrorCode::kEmptyInput, "training set is empty");
  if (!(cfg.learning_rate > 0) || cfg.epochs < 0 || cfg.init_scale < 0) {
    throw Error(ErrorCode::kUsage, "invalid training configuration");
  }
  const std::size_t n = split.train.front().features.size();
  check_shapes(split.train, n);

  PerceptronModel m;
  m.weight_mode = cfg.weight_mode;
  m.weights.resize(n);
  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> init(0.0, cfg.init_scale);
  for (auto& w : m.weights) w = cfg.init_scale > 0 ? init(rng) : 0.0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto lg = loss_and_gradient(split.train, m.weights, m.bias);
    if (!std::isfinite(lg.loss)) {
      throw Error(ErrorCode::kDivergence, "loss is not finite at epoch " + std::to_string(epoch));
    }
    for (std::size_t k = 0; k < n; ++k) {
      m.weights[k] -= cfg.learning_rate * lg.grad_weights[k];
      if (cfg.weight_mode == WeightMode::kNonnegative && m.weights[k] < 0) m.weights[k] = 0;
    }
    m.bias -= cfg.learning_rate * lg.grad_bias;
    if (observer) observer(epoch, m);
  }

  const double final_loss = loss_and_gradient(split.train, m.weights, m.bias).loss;
  if (!std::isfinite(final_loss)) {
    throw Error(ErrorCode::kDivergence, "loss is not finite at epoch " + std::to_string(cfg.epochs));
  }
  m.train_meta = TrainMeta{cfg.seed, cfg.epochs, cfg.learning_rate, final_loss};
  return m;
}

DigitalPrediction predict_digital(const PerceptronModel& model, const dataset::Sample& sample) {
  if (sample.features.size() != model.n()) {
    throw Error(ErrorCode::kShape, "sample has " + std::to_string(sample.features.size()) +
                                       " features, model expects " + std::to_string(model.n()));
  }
  double score = 0.0;
  for (std::size_t k = 0; k < model.n(); ++k) score += model.weights[k] * sample.features[k];
  score += model.bias;
  return {score, score > 0 ? 1 : 0};
}

std::size_t Evaluation::total() const {
  return confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1];
}

Evaluation tally(std::span<const int> labels, std::span<const int> predicted) {
  if (labels.empty()) throw Error(ErrorCode::kEmptyInput, "cannot evaluate an empty sample list");
  if (labels.size() != predicted.size()) {
    throw Error(ErrorCode::kShape, "label and prediction counts differ");
  }
  Evaluation ev;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ++ev.confusion[labels[i] != 0][predicted[i] != 0];
    correct += (labels[i] != 0) == (predicted[i] != 0);
  }
  ev.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
  return ev;
}

Evaluation evaluate(const PerceptronModel& model, std::span<const dataset::Sample> samples,
                    unsigned threads) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyInput, "cannot evaluate an empty sample list");
  std::vector<int> labels(samples.size()), predicted(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    labels[i] = samples[i].label;
    predicted[i] = predict_digital(model, samples[i]).cls;
  });
  return tally(labels, predicted);
}

}  // namespace combnet::model

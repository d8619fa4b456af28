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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "combnet/dataset.hpp"

namespace combnet::model {

// nonnegative is the mode that can be deployed on comb-line powers; the
// bias stays signed and is applied through the bias symbol.
enum class WeightMode { kUnconstrained, kNonnegative };

const char* weight_mode_name(WeightMode mode);
WeightMode parse_weight_mode(const std::string& name);

struct TrainMeta {
  std::uint64_t seed = 0;
  int epochs = 0;
  double learning_rate = 0.0;
  double final_loss = 0.0;
};

struct PerceptronModel {
  std::vector<double> weights;
  double bias = 0.0;
  WeightMode weight_mode = WeightMode::kNonnegative;
  TrainMeta train_meta;

  std::size_t n() const { return weights.size(); }
};

struct TrainConfig {
  double learning_rate = 0.5;
  int epochs = 2000;
  std::uint64_t seed = 0;
  WeightMode weight_mode = WeightMode::kNonnegative;
  double init_scale = 0.01;  // initial weights ~ U(0, init_scale)
};

/// 1 / (1 + e^-z), evaluated without overflow for any finite z.
double sigmoid(double z);

struct LossGradient {
  double loss = 0.0;  // mean binary cross-entropy
  std::vector<double> grad_weights;
  double grad_bias = 0.0;
};

/// Mean cross-entropy of sigmoid(x.w + b) and its analytic gradient.
LossGradient loss_and_gradient(std::span<const dataset::Sample> samples,
                               std::span<const double> weights, double bias);

/// Called after every epoch with (epoch index, current model).
using EpochObserver = std::function<void(int, const PerceptronModel&)>;

/// Full-batch gradient descent. In nonnegative mode weights are projected
/// onto w >= 0 after each step.
PerceptronModel train(const dataset::DatasetSplit& split, const TrainConfig& cfg,
                      const EpochObserver& observer = {});

struct DigitalPrediction {
  double score = 0.0;
  int cls = 0;  // 1 iff score > 0
};

DigitalPrediction predict_digital(const PerceptronModel& model, const dataset::Sample& sample);

struct Evaluation {
  double accuracy = 0.0;
  // confusion[label][predicted]
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  std::size_t total() const;
};

/// Tallies predicted classes against labels, index by index.
Evaluation tally(std::span<const int> labels, std::span<const int> predicted);

Evaluation evaluate(const PerceptronModel& model, std::span<const dataset::Sample> samples,
                    unsigned threads = 1);

}  // namespace combnet::model

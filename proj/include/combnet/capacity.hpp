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

// Closed-form throughput / latency planning for broadcast-and-delay neurons.
//
// One dot product of length N occupies a detected waveform of 2N-1 symbols
// (frame_2N_minus_1) or, counting the frame boundary symbol, 2N symbols
// (frame_2N). Only one slot of that waveform carries the result. All rates
// are in operations per second; one MAC is two operations.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace combnet::capacity {

enum class FrameConvention { kFrame2N, kFrame2NMinus1 };

const char* convention_name(FrameConvention c);
FrameConvention parse_convention(const std::string& name);

/// Symbol slots per dot product of length n.
double frame_symbols(std::size_t n, FrameConvention c);

struct LayerSpec {
  std::size_t input_dim = 1;
  std::size_t n_neurons = 1;
};

struct NetworkPlan {
  std::vector<LayerSpec> layers;
  double symbol_duration_s = 84e-12;
  int bit_depth = 8;
  double buffer_latency_s = 200e-12;
  int buffer_count = 1;
  FrameConvention convention = FrameConvention::kFrame2NMinus1;
};

struct PerceptronThroughput {
  double macs_s = 0.0;
  double ops_s = 0.0;
  double bits_s = 0.0;
  double frame_duration_s = 0.0;
};

PerceptronThroughput perceptron_throughput(std::size_t n, double tau_s, int bits,
                                           FrameConvention convention);

struct LayerThroughput {
  double waveform_duration_s = 0.0;
  double per_neuron_ops_s = 0.0;
  double total_ops_s = 0.0;
  std::size_t wavelengths = 0;
};

LayerThroughput layer_throughput(const LayerSpec& layer, double tau_s,
                                 FrameConvention convention = FrameConvention::kFrame2NMinus1);

struct ThroughputReport {
  FrameConvention convention = FrameConvention::kFrame2NMinus1;
  std::vector<LayerThroughput> per_layer;
  double network_total_ops_s = 0.0;
  double network_bits_s = 0.0;
  double latency_s = 0.0;
};

/// Throws kPlan for an empty plan, a non-positive symbol time or bit depth,
/// or a layer whose input_dim differs from the previous layer's n_neurons.
void validate_plan(const NetworkPlan& plan, bool allow_empty = false);

ThroughputReport network_throughput(const NetworkPlan& plan);

/// buffer_count * buffer_latency + sum over layers of 2 (2 input_dim - 1) tau:
/// each layer's waveform is held twice as long for re-sampling.
double network_latency(const NetworkPlan& plan);

/// input_dim * n_neurons per layer.
std::vector<std::size_t> wavelengths_required(const NetworkPlan& plan);

struct Potential {
  double ops_s = 0.0;
  double bits_s = 0.0;
};

/// layers * neurons * baud: one result per neuron per symbol.
Potential rough_potential(double n_layers, double neurons_per_layer, double baud_hz, double bits);

struct ComparisonRow {
  std::string approach;
  std::string citation;  // only set where the table keeps it in its own column
  std::optional<std::string> compatibility;
  std::optional<std::string> latency;
  std::optional<std::string> ops;
  std::optional<std::string> bits_s;
};

/// Published ONN speed comparison; absent entries are std::nullopt.
std::vector<ComparisonRow> comparison_table();

/// The table as CSV, absent entries written as "—".
std::string comparison_table_csv();

}  // namespace combnet::capacity

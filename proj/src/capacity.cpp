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
#include "combnet/capacity.hpp"

#include <sstream>

#include "combnet/error.hpp"

namespace combnet::capacity {

const char* convention_name(FrameConvention c) {
  return c == FrameConvention::kFrame2N ? "frame_2N" : "frame_2N_minus_1";
}

FrameConvention parse_convention(const std::string& name) {
  if (name == "frame_2N") return FrameConvention::kFrame2N;
  if (name == "frame_2N_minus_1") return FrameConvention::kFrame2NMinus1;
  throw Error(ErrorCode::kPlan,
              "unknown convention '" + name + "' (expected frame_2N|frame_2N_minus_1)");
}

double frame_symbols(std::size_t n, FrameConvention c) {
  const double two_n = 2.0 * static_cast<double>(n);
  return c == FrameConvention::kFrame2N ? two_n : two_n - 1.0;
}

PerceptronThroughput perceptron_throughput(std::size_t n, double tau_s, int bits,
                                           FrameConvention convention) {
  if (n < 1 || !(tau_s > 0) || bits < 1) {
    throw Error(ErrorCode::kPlan, "perceptron throughput needs N >= 1, tau > 0, bits >= 1");
  }
  PerceptronThroughput t;
  t.frame_duration_s = frame_symbols(n, convention) * tau_s;
  t.macs_s = static_cast<double>(n) / t.frame_duration_s;
  t.ops_s = 2.0 * t.macs_s;
  t.bits_s = t.ops_s * bits;
  return t;
}

LayerThroughput layer_throughput(const LayerSpec& layer, double tau_s, FrameConvention convention) {
  if (layer.input_dim < 1 || layer.n_neurons < 1 || !(tau_s > 0)) {
    throw Error(ErrorCode::kPlan, "layer needs input_dim >= 1, n_neurons >= 1, tau > 0");
  }
  LayerThroughput t;
  t.waveform_duration_s = frame_symbols(layer.input_dim, convention) * tau_s;
  t.per_neuron_ops_s = 2.0 * static_cast<double>(layer.input_dim) / t.waveform_duration_s;
  t.total_ops_s = t.per_neuron_ops_s * static_cast<double>(layer.n_neurons);
  t.wavelengths = layer.input_dim * layer.n_neurons;
  return t;
}

void validate_plan(const NetworkPlan& plan, bool allow_empty) {
  if (plan.layers.empty() && !allow_empty) throw Error(ErrorCode::kPlan, "plan has no layers");
  if (!(plan.symbol_duration_s > 0)) throw Error(ErrorCode::kPlan, "symbol duration must be > 0");
  if (plan.bit_depth < 1) throw Error(ErrorCode::kPlan, "bit_depth must be >= 1");
  if (plan.buffer_count < 0 || plan.buffer_latency_s < 0) {
    throw Error(ErrorCode::kPlan, "buffer latency and count must be >= 0");
  }
  for (std::size_t i = 0; i < plan.layers.size(); ++i) {
    const auto& l = plan.layers[i];
    if (l.input_dim < 1 || l.n_neurons < 1) {
      throw Error(ErrorCode::kPlan, "layer " + std::to_string(i) + " has a zero dimension");
    }
    if (i > 0 && l.input_dim != plan.layers[i - 1].n_neurons) {
      throw Error(ErrorCode::kPlan,
                  "layers " + std::to_string(i - 1) + " -> " + std::to_string(i) + ": " +
                      std::to_string(plan.layers[i - 1].n_neurons) + " outputs feed " +
                      std::to_string(l.input_dim) + " inputs");
    }
  }
}

ThroughputReport network_throughput(const NetworkPlan& plan) {
  validate_plan(plan);
  ThroughputReport r;
  r.convention = plan.convention;
  for (const auto& l : plan.layers) {
    r.per_layer.push_back(layer_throughput(l, plan.symbol_duration_s, plan.convention));
    r.network_total_ops_s += r.per_layer.back().total_ops_s;
  }
  r.network_bits_s = r.network_total_ops_s * plan.bit_depth;
  r.latency_s = network_latency(plan);
  return r;
}

double network_latency(const NetworkPlan& plan) {
  validate_plan(plan, /*allow_empty=*/true);
  double latency = plan.buffer_count * plan.buffer_latency_s;
  for (const auto& l : plan.layers) {
    latency += 2.0 * frame_symbols(l.input_dim, FrameConvention::kFrame2NMinus1) *
               plan.symbol_duration_s;
  }
  return latency;
}

std::vector<std::size_t> wavelengths_required(const NetworkPlan& plan) {
  validate_plan(plan, /*allow_empty=*/true);
  std::vector<std::size_t> out;
  for (const auto& l : plan.layers) out.push_back(l.input_dim * l.n_neurons);
  return out;
}

Potential rough_potential(double n_layers, double neurons_per_layer, double baud_hz, double bits) {
  if (!(n_layers > 0 && neurons_per_layer > 0 && baud_hz > 0 && bits > 0)) {
    throw Error(ErrorCode::kPlan, "potential needs positive layers, neurons, baud and bits");
  }
  Potential p;
  p.ops_s = n_layers * neurons_per_layer * baud_hz;
  p.bits_s = p.ops_s * bits;
  return p;
}

std::vector<ComparisonRow> comparison_table() {
  constexpr auto absent = std::nullopt;
  return {
      {"Diffraction devices [17]", "", absent, "< 10 ns", absent, absent},
      {"Integrated couplers [3]", "", absent, "< 0.1 ns", absent, absent},
      {"Reservoir computing [20]", "", "Yes", "< 1 μs", "17.6 G", absent},
      {"Spike computing [23]", "", "Yes", "< 1 μs", "8 G", "8 G"},
      {"Spike computing [24]", "", absent, "< 0.1 μs", absent, absent},
      {"Single Perceptron", "[11]", "Yes", "64 μs", "11.9 G", "95.2 G"},
      {"Deep ONN", "[12]", "Yes", ">18.68 ns", ">10 T", ">80 T"},
  };
}

std::string comparison_table_csv() {
  auto cell = [](const std::optional<std::string>& v) { return v ? *v : std::string("—"); };
  std::ostringstream out;
  out << "approach,citation,compatibility,latency,ops,bits_s\n";
  for (const auto& r : comparison_table()) {
    out << r.approach << ',' << r.citation << ',' << cell(r.compatibility) << ','
        << cell(r.latency) << ',' << cell(r.ops) << ',' << cell(r.bits_s) << '\n';
  }
  return out.str();
}

}  // namespace combnet::capacity

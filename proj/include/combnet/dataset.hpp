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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace combnet::dataset {

inline constexpr std::size_t kMnistSide = 28;
inline constexpr std::size_t kGridSide = 7;
inline constexpr std::size_t kDigitFeatures = kGridSide * kGridSide;
inline constexpr std::size_t kWdbcFeatures = 30;

enum class Task { kDigits, kCancer };

const char* task_name(Task task);
Task parse_task(const std::string& name);

/// 8-bit gray image as stored in an IDX file, row-major.
struct RawImage {
  std::size_t rows = kMnistSide;
  std::size_t cols = kMnistSide;
  std::vector<std::uint8_t> pixels;
  int label = 0;
  std::size_t source_index = 0;  // position in the IDX file
};

/// Row-major grid of reals.
struct Grid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
};

/// Normalized feature vector with a binary label. `id` identifies the
/// source record so that split disjointness can be checked.
struct Sample {
  std::vector<double> features;
  int label = 0;
  std::size_t id = 0;
};

struct DatasetSplit {
  std::vector<Sample> train;
  std::vector<Sample> test;
  std::uint64_t seed = 0;
  Task provenance = Task::kDigits;
};

enum class DownsampleMethod { kBlockMean, kStride };

/// Reads an IDX3 image file and IDX1 label file and keeps images whose label
/// is in `digits`, in file order. With `per_digit_cap`, at most that many
/// images of each digit are kept (the first ones in file order).
std::vector<RawImage> load_mnist(const std::string& images_file,
                                 const std::string& labels_file,
                                 const std::set<int>& digits,
                                 std::optional<std::size_t> per_digit_cap = {});

/// 28x28 -> 7x7 in [0,1]. Block mean averages each 4x4 block; stride keeps
/// the top-left pixel of each block.
Grid downsample_7x7(const RawImage& image,
                    DownsampleMethod method = DownsampleMethod::kBlockMean);

/// Columns head-to-tail: output[c * 7 + r] = grid(r, c).
std::vector<double> flatten_column_major(const Grid& grid);
Grid unflatten_column_major(std::span<const double> flat,
                            std::size_t rows = kGridSide,
                            std::size_t cols = kGridSide);

/// Binary digit task: label 1 for `positive_digit`, 0 for everything else.
std::vector<Sample> digit_samples(
    const std::vector<RawImage>& images, int positive_digit,
    DownsampleMethod method = DownsampleMethod::kBlockMean);

/// Header-less `id,diagnosis,f1..f30` rows. Features are min-max scaled per
/// column over the whole file; label 1 = malignant.
std::vector<Sample> load_wdbc(const std::string& csv_file);

/// Deterministic shuffle under `seed`, then the first n_train samples go to
/// train and the next n_test to test.
DatasetSplit split(std::vector<Sample> samples, std::size_t n_train,
                   std::size_t n_test, std::uint64_t seed, Task provenance);

}  // namespace combnet::dataset

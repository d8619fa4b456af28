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
#include "combnet/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "combnet/error.hpp"
#include "combnet/runtime.hpp"

namespace combnet::dataset {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kPath, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& buf, std::size_t off) {
  return (std::uint32_t{buf[off]} << 24) | (std::uint32_t{buf[off + 1]} << 16) |
         (std::uint32_t{buf[off + 2]} << 8) | std::uint32_t{buf[off + 3]};
}

void require_bytes(const std::vector<std::uint8_t>& buf, std::size_t need,
                   const std::string& path) {
  if (buf.size() < need) {
    throw Error(ErrorCode::kFormat, path + ": truncated IDX file (have " +
                                        std::to_string(buf.size()) + " bytes, need " +
                                        std::to_string(need) + ")");
  }
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                   : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
      field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

const char* task_name(Task task) { return task == Task::kDigits ? "digits" : "cancer"; }

Task parse_task(const std::string& name) {
  if (name == "digits") return Task::kDigits;
  if (name == "cancer") return Task::kCancer;
  throw Error(ErrorCode::kUsage, "unknown task '" + name + "' (expected digits|cancer)");
}

std::vector<RawImage> load_mnist(const std::string& images_file,
                                 const std::string& labels_file,
                                 const std::set<int>& digits,
                                 std::optional<std::size_t> per_digit_cap) {
  if (digits.empty()) throw Error(ErrorCode::kUsage, "digit filter is empty");

  const auto images = read_file(images_file);
  const auto labels = read_file(labels_file);
  require_bytes(images, 16, images_file);
  require_bytes(labels, 8, labels_file);
  if (read_be32(images, 0) != kImageMagic) {
    throw Error(ErrorCode::kFormat, images_file + ": bad IDX image magic");
  }
  if (read_be32(labels, 0) != kLabelMagic) {
    throw Error(ErrorCode::kFormat, labels_file + ": bad IDX label magic");
  }
  const std::size_t count = read_be32(images, 4);
  const std::size_t rows = read_be32(images, 8);
  const std::size_t cols = read_be32(images, 12);
  if (read_be32(labels, 4) != count) {
    throw Error(ErrorCode::kFormat, "image count " + std::to_string(count) +
                                        " does not match label count " +
                                        std::to_string(read_be32(labels, 4)));
  }
  const std::size_t pixels = rows * cols;
  require_bytes(images, 16 + count * pixels, images_file);
  require_bytes(labels, 8 + count, labels_file);

  std::vector<RawImage> out;
  std::map<int, std::size_t> taken;
  for (std::size_t i = 0; i < count; ++i) {
    const int label = labels[8 + i];
    if (!digits.contains(label)) continue;
    if (per_digit_cap && taken[label] >= *per_digit_cap) continue;
    ++taken[label];
    RawImage img;
    img.rows = rows;
    img.cols = cols;
    img.label = label;
    img.source_index = i;
    auto first = images.begin() + static_cast<std::ptrdiff_t>(16 + i * pixels);
    img.pixels.assign(first, first + static_cast<std::ptrdiff_t>(pixels));
    out.push_back(std::move(img));
  }
  if (out.empty()) {
    std::ostringstream msg;
    msg << "no images with label in {";
    for (auto it = digits.begin(); it != digits.end(); ++it) msg << (it == digits.begin() ? "" : ",") << *it;
    msg << "} in " << labels_file;
    throw Error(ErrorCode::kEmptySelection, msg.str());
  }
  return out;
}

Grid downsample_7x7(const RawImage& image, DownsampleMethod method) {
  if (image.rows != kMnistSide || image.cols != kMnistSide ||
      image.pixels.size() != kMnistSide * kMnistSide) {
    throw Error(ErrorCode::kDimension, "downsample expects a 28x28 image, got " +
                                           std::to_string(image.rows) + "x" +
                                           std::to_string(image.cols));
  }
  constexpr std::size_t block = kMnistSide / kGridSide;
  Grid g{kGridSide, kGridSide, std::vector<double>(kGridSide * kGridSide, 0.0)};
  for (std::size_t r = 0; r < kGridSide; ++r) {
    for (std::size_t c = 0; c < kGridSide; ++c) {
      if (method == DownsampleMethod::kStride) {
        g.at(r, c) = image.pixels[(r * block) * kMnistSide + c * block] / 255.0;
        continue;
      }
      unsigned sum = 0;
      for (std::size_t dr = 0; dr < block; ++dr)
        for (std::size_t dc = 0; dc < block; ++dc)
          sum += image.pixels[(r * block + dr) * kMnistSide + c * block + dc];
      g.at(r, c) = static_cast<double>(sum) / (block * block * 255.0);
    }
  }
  return g;
}

std::vector<double> flatten_column_major(const Grid& grid) {
  if (grid.rows != kGridSide || grid.cols != kGridSide ||
      grid.values.size() != kGridSide * kGridSide) {
    throw Error(ErrorCode::kDimension, "flatten expects a 7x7 grid, got " +
                                           std::to_string(grid.rows) + "x" +
                                           std::to_string(grid.cols));
  }
  std::vector<double> out(grid.rows * grid.cols);
  for (std::size_t c = 0; c < grid.cols; ++c)
    for (std::size_t r = 0; r < grid.rows; ++r) out[c * grid.rows + r] = grid.at(r, c);
  return out;
}

Grid unflatten_column_major(std::span<const double> flat, std::size_t rows, std::size_t cols) {
  if (flat.size() != rows * cols) {
    throw Error(ErrorCode::kDimension, "unflatten: " + std::to_string(flat.size()) +
                                           " values cannot fill " + std::to_string(rows) +
                                           "x" + std::to_string(cols));
  }
  Grid g{rows, cols, std::vector<double>(rows * cols)};
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) g.at(r, c) = flat[c * rows + r];
  return g;
}

std::vector<Sample> digit_samples(const std::vector<RawImage>& images, int positive_digit,
                                  DownsampleMethod method) {
  std::vector<Sample> out;
  out.reserve(images.size());
  for (const auto& img : images) {
    out.push_back(Sample{flatten_column_major(downsample_7x7(img, method)),
                         img.label == positive_digit ? 1 : 0, img.source_index});
  }
  return out;
}

std::vector<Sample> load_wdbc(const std::string& csv_file) {
  std::ifstream in(csv_file);
  if (!in) throw Error(ErrorCode::kPath, "cannot open " + csv_file);

  std::vector<std::array<double, kWdbcFeatures>> rows;
  std::vector<int> labels;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    if (fields.size() != kWdbcFeatures + 2) {
      throw Error(ErrorCode::kParse, "row " + std::to_string(row) + ": expected " +
                                         std::to_string(kWdbcFeatures + 2) + " fields, got " +
                                         std::to_string(fields.size()));
    }
    if (fields[1] != "M" && fields[1] != "B") {
      throw Error(ErrorCode::kParse, "row " + std::to_string(row) + ": diagnosis '" +
                                         std::string(fields[1]) + "' is not M or B");
    }
    std::array<double, kWdbcFeatures> values{};
    for (std::size_t f = 0; f < kWdbcFeatures; ++f) {
      const auto field = fields[f + 2];
      const auto* end = field.data() + field.size();
      auto [ptr, ec] = std::from_chars(field.data(), end, values[f]);
      if (ec != std::errc() || ptr != end || field.empty()) {
        throw Error(ErrorCode::kParse, "row " + std::to_string(row) + ": feature f" +
                                           std::to_string(f + 1) + " is not numeric ('" +
                                           std::string(field) + "')");
      }
    }
    rows.push_back(values);
    labels.push_back(fields[1] == "M" ? 1 : 0);
    ++row;
  }
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, csv_file + ": no rows");

  std::array<double, kWdbcFeatures> lo, hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const auto& r : rows) {
    for (std::size_t f = 0; f < kWdbcFeatures; ++f) {
      lo[f] = std::min(lo[f], r[f]);
      hi[f] = std::max(hi[f], r[f]);
    }
  }
  for (std::size_t f = 0; f < kWdbcFeatures; ++f) {
    if (!(hi[f] > lo[f])) {
      throw Error(ErrorCode::kScaleDegenerate,
                  "feature column f" + std::to_string(f + 1) + " is constant");
    }
  }

  std::vector<Sample> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Sample s;
    s.features.resize(kWdbcFeatures);
    for (std::size_t f = 0; f < kWdbcFeatures; ++f) {
      s.features[f] = std::clamp((rows[i][f] - lo[f]) / (hi[f] - lo[f]), 0.0, 1.0);
    }
    s.label = labels[i];
    s.id = i;
    out.push_back(std::move(s));
  }
  return out;
}

DatasetSplit split(std::vector<Sample> samples, std::size_t n_train, std::size_t n_test,
                   std::uint64_t seed, Task provenance) {
  if (n_train + n_test > samples.size()) {
    throw Error(ErrorCode::kSize, "split of " + std::to_string(n_train) + "+" +
                                      std::to_string(n_test) + " requested but only " +
                                      std::to_string(samples.size()) + " samples available");
  }
  Rng rng(seed);
  std::shuffle(samples.begin(), samples.end(), rng);
  DatasetSplit out;
  out.seed = seed;
  out.provenance = provenance;
  auto train_end = samples.begin() + static_cast<std::ptrdiff_t>(n_train);
  out.train.assign(std::make_move_iterator(samples.begin()), std::make_move_iterator(train_end));
  out.test.assign(std::make_move_iterator(train_end),
                  std::make_move_iterator(train_end + static_cast<std::ptrdiff_t>(n_test)));
  return out;
}

}  // namespace combnet::dataset

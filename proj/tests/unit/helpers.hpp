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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "combnet/dataset.hpp"
#include "combnet/error.hpp"

namespace testutil {

namespace fs = std::filesystem;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("combnet-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

inline void put_be32(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

// Writes an IDX3 image file and IDX1 label file; image i is filled with
// pixel value fill[i].
inline void write_idx(const std::string& images, const std::string& labels,
                      const std::vector<int>& label_values, const std::vector<std::uint8_t>& fill,
                      std::uint32_t image_magic = 2051, std::uint32_t label_magic = 2049) {
  std::ofstream img(images, std::ios::binary);
  put_be32(img, image_magic);
  put_be32(img, static_cast<std::uint32_t>(label_values.size()));
  put_be32(img, 28);
  put_be32(img, 28);
  for (std::size_t i = 0; i < label_values.size(); ++i) {
    const std::vector<char> px(28 * 28, static_cast<char>(fill[i]));
    img.write(px.data(), static_cast<std::streamsize>(px.size()));
  }
  std::ofstream lab(labels, std::ios::binary);
  put_be32(lab, label_magic);
  put_be32(lab, static_cast<std::uint32_t>(label_values.size()));
  for (int l : label_values) lab.put(static_cast<char>(l));
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

template <typename Fn>
combnet::ErrorCode error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const combnet::Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a combnet::Error");
}

template <typename Fn>
std::string error_message_of(Fn&& fn) {
  try {
    fn();
  } catch (const combnet::Error& e) {
    return e.what();
  }
  throw std::runtime_error("expected a combnet::Error");
}

inline std::vector<double> random_unit_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline std::string data_file(const std::string& name) { return std::string(COMBNET_DATA_DIR) + "/" + name; }
inline bool have_data() {
  return fs::exists(data_file("mnist-5k-images-idx3-ubyte")) && fs::exists(data_file("wdbc.data"));
}

}  // namespace testutil

// Copyright 2026 The fedq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedq/data.h"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>

#include "fedq/errors.h"

namespace fedq {
namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

class ByteReader {
 public:
  ByteReader(std::span<const unsigned char> bytes, std::string prefix)
      : bytes_(bytes), prefix_(std::move(prefix)) {}

  std::uint32_t ReadU32(const char* field) {
    if (pos_ + 4 > bytes_.size()) {
      throw ParseError(prefix_ + "." + field, "file truncated in header");
    }
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }

  std::span<const unsigned char> Take(std::size_t n, const char* field) {
    if (bytes_.size() - pos_ < n) {
      throw ParseError(prefix_ + "." + field,
                       "expected " + std::to_string(n) + " bytes, found " +
                           std::to_string(bytes_.size() - pos_));
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::span<const unsigned char> bytes_;
  std::string prefix_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file");
  return {std::istreambuf_iterator<char>(in),
          std::istreambuf_iterator<char>()};
}

std::string Hex(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

}  // namespace

std::vector<double> BlobCenter(int k, int num_classes, std::size_t input_dim) {
  if (num_classes < 2) throw InputError("blobs need at least 2 classes");
  if (input_dim < 1) throw InputError("blobs need input_dim >= 1");
  if (k < 0 || k >= num_classes) throw InputError("blob class out of range");
  // Smallest base m with m^d >= K.
  std::int64_t m = 1;
  auto covers = [&](std::int64_t base) {
    std::int64_t cap = 1;
    for (std::size_t j = 0; j < input_dim && cap < num_classes; ++j) cap *= base;
    return cap >= num_classes;
  };
  while (!covers(m)) ++m;
  std::vector<double> c(input_dim, 0.0);
  std::int64_t rest = k;
  const double shift = 0.5 * static_cast<double>(m - 1) * kBlobSpacing;
  for (std::size_t j = 0; j < input_dim; ++j) {
    c[j] = static_cast<double>(rest % m) * kBlobSpacing - shift;
    rest /= m;
  }
  return c;
}

LabeledDataset SyntheticBlobs(int num_classes, std::size_t input_dim,
                              std::size_t n_per_class, double spread,
                              Rng& rng) {
  if (!(spread >= 0.0)) throw InputError("blob spread must be >= 0");
  std::vector<double> features;
  std::vector<int> labels;
  features.reserve(static_cast<std::size_t>(num_classes) * n_per_class *
                   input_dim);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < num_classes; ++k) {
    const auto center = BlobCenter(k, num_classes, input_dim);
    for (std::size_t i = 0; i < n_per_class; ++i) {
      for (std::size_t j = 0; j < input_dim; ++j) {
        features.push_back(spread == 0.0 ? center[j]
                                         : center[j] + spread * normal(rng));
      }
      labels.push_back(k);
    }
  }
  return LabeledDataset(input_dim, num_classes, std::move(features),
                        std::move(labels));
}

LabeledDataset ParseIdx(std::span<const unsigned char> images,
                        std::span<const unsigned char> labels,
                        int num_classes) {
  ByteReader img(images, "images");
  const std::uint32_t img_magic = img.ReadU32("magic");
  if (img_magic != kImagesMagic) {
    throw ParseError("images.magic", "expected 0x00000803, got " +
                                         Hex(img_magic));
  }
  const std::uint32_t count = img.ReadU32("count");
  const std::uint32_t rows = img.ReadU32("rows");
  const std::uint32_t cols = img.ReadU32("cols");
  if (rows == 0 || cols == 0) {
    throw ParseError("images.rows", "image dimensions must be positive");
  }

  ByteReader lab(labels, "labels");
  const std::uint32_t lab_magic = lab.ReadU32("magic");
  if (lab_magic != kLabelsMagic) {
    throw ParseError("labels.magic", "expected 0x00000801, got " +
                                         Hex(lab_magic));
  }
  const std::uint32_t label_count = lab.ReadU32("count");
  if (label_count != count) {
    throw ParseError("labels.count",
                     "images declare " + std::to_string(count) +
                         " samples but labels declare " +
                         std::to_string(label_count));
  }

  const std::size_t dim = static_cast<std::size_t>(rows) * cols;
  auto pixels = img.Take(static_cast<std::size_t>(count) * dim, "data");
  auto label_bytes = lab.Take(count, "data");

  std::vector<double> features(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    features[i] = static_cast<double>(pixels[i]) / 255.0;
  }
  std::vector<int> ys(count);
  for (std::size_t i = 0; i < count; ++i) {
    ys[i] = label_bytes[i];
    if (ys[i] >= num_classes) {
      throw ParseError("labels.data", "label " + std::to_string(ys[i]) +
                                          " at index " + std::to_string(i) +
                                          " >= num_classes " +
                                          std::to_string(num_classes));
    }
  }
  return LabeledDataset(dim, num_classes, std::move(features), std::move(ys));
}

LabeledDataset LoadIdx(const std::string& images_path,
                       const std::string& labels_path, int num_classes) {
  const auto images = ReadFile(images_path);
  const auto labels = ReadFile(labels_path);
  return ParseIdx(images, labels, num_classes);
}

}  // namespace fedq

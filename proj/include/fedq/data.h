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

#ifndef FEDQ_DATA_H_
#define FEDQ_DATA_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fedq/dataset.h"
#include "fedq/rng.h"

namespace fedq {

// Distance between neighbouring blob centres.
inline constexpr double kBlobSpacing = 4.0;

// Centre of class `k` among `num_classes` blobs in `input_dim` dimensions.
// With m = ceil(K^(1/d)), class k sits at the mixed-radix digits of k in base
// m (least significant digit on axis 0) times kBlobSpacing, and the lattice is
// shifted so that its bounding box is centred on the origin.
std::vector<double> BlobCenter(int k, int num_classes, std::size_t input_dim);

// Isotropic Gaussian clusters, n_per_class samples per class, class-major
// order. spread == 0 puts every sample exactly on its centre.
LabeledDataset SyntheticBlobs(int num_classes, std::size_t input_dim,
                              std::size_t n_per_class, double spread,
                              Rng& rng);

// Parses an IDX image file (magic 0x00000803, dims count/rows/cols) and an IDX
// label file (magic 0x00000801). Pixels are scaled by 1/255 and flattened
// row-major. Throws IoError when a file cannot be read and ParseError (field
// "images.magic", "labels.count", "images.data", ...) when malformed.
LabeledDataset LoadIdx(const std::string& images_path,
                       const std::string& labels_path, int num_classes = 10);

// Same, from in-memory file contents.
LabeledDataset ParseIdx(std::span<const unsigned char> images,
                        std::span<const unsigned char> labels,
                        int num_classes = 10);

}  // namespace fedq

#endif  // FEDQ_DATA_H_

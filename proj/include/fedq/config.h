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

// JSON experiment configuration. The schema is documented in README.md. Unknown
// keys, wrong types and constraint violations are rejected with a
// ConfigError naming the dotted key path.

#ifndef FEDQ_CONFIG_H_
#define FEDQ_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>

#include "fedq/dataset.h"
#include "fedq/federation.h"
#include "json.hpp"

namespace fedq {

enum class DatasetKind { kBlobs, kIdx };

struct DatasetConfig {
  DatasetKind kind = DatasetKind::kBlobs;
  // blobs
  int num_classes = 3;
  std::size_t input_dim = 2;
  std::size_t samples_per_class = 200;
  std::size_t test_samples_per_class = 100;
  double spread = 0.5;
  std::optional<std::uint64_t> seed;  // defaults to the run seed
  // idx
  std::string train_images, train_labels, test_images, test_labels;

  friend bool operator==(const DatasetConfig&, const DatasetConfig&) = default;
};

struct RunConfig {
  ExperimentConfig experiment;
  DatasetConfig dataset;
};

struct Datasets {
  LabeledDataset train;
  LabeledDataset test;
};

RunConfig ParseConfig(const nlohmann::json& doc);
RunConfig ParseConfigString(const std::string& text);
// Throws IoError if unreadable, ConfigError if invalid.
RunConfig ParseConfigFile(const std::string& path);

// Canonical JSON form of a config with every default spelled out.
// ParseConfig(ToJson(c)) == c.
nlohmann::json ToJson(const RunConfig& cfg);

// Builds or loads the train/test sets and fills in the model's input_dim and
// num_classes from them. Throws ConfigError when an explicitly configured
// model dimension disagrees with the data.
Datasets PrepareData(RunConfig& cfg);

}  // namespace fedq

#endif  // FEDQ_CONFIG_H_

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

#include "fedq/config.h"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "fedq/data.h"
#include "fedq/errors.h"

namespace fedq {
namespace {

using nlohmann::json;

// Typed, path-aware view of one JSON object that remembers which keys were
// consumed so leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(Name(""), "expected an object");
  }

  bool Has(const std::string& key) const {
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  const json* Raw(const std::string& key) {
    seen_.insert(key);
    return Has(key) ? &obj_.at(key) : nullptr;
  }

  template <typename Int>
  Int Integer(const std::string& key, Int def) {
    const json* v = Raw(key);
    if (!v) return def;
    if (!v->is_number_integer()) {
      throw ConfigError(Name(key), "expected an integer");
    }
    if (v->is_number_unsigned()) {
      const auto u = v->get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
        throw ConfigError(Name(key), "integer out of range");
      }
      return static_cast<Int>(u);
    }
    const auto s = v->get<std::int64_t>();
    if (s < static_cast<std::int64_t>(std::numeric_limits<Int>::min()) ||
        (s > 0 && static_cast<std::uint64_t>(s) >
                      static_cast<std::uint64_t>(
                          std::numeric_limits<Int>::max()))) {
      throw ConfigError(Name(key), "integer out of range");
    }
    return static_cast<Int>(s);
  }

  double Real(const std::string& key, double def) {
    const json* v = Raw(key);
    if (!v) return def;
    if (!v->is_number()) throw ConfigError(Name(key), "expected a number");
    return v->get<double>();
  }

  std::string String(const std::string& key, const std::string& def) {
    const json* v = Raw(key);
    if (!v) return def;
    if (!v->is_string()) throw ConfigError(Name(key), "expected a string");
    return v->get<std::string>();
  }

  std::string Name(const std::string& key) const {
    if (path_.empty()) return key;
    if (key.empty()) return path_;
    return path_ + "." + key;
  }

  // Throws for any key that was never read.
  void Finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(Name(key), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Parse>
auto Enum(ObjectReader& r, const std::string& key, const std::string& def,
          Parse parse) {
  const std::string s = r.String(key, def);
  try {
    return parse(s);
  } catch (const InputError& e) {
    throw ConfigError(r.Name(key), e.what());
  }
}

void Require(bool ok, const std::string& key, const std::string& constraint) {
  if (!ok) throw ConfigError(key, constraint);
}

DatasetConfig ParseDataset(const json* node) {
  DatasetConfig d;
  if (!node) return d;
  ObjectReader r(*node, "dataset");
  const std::string kind = r.String("kind", "blobs");
  if (kind == "blobs") {
    d.kind = DatasetKind::kBlobs;
    d.num_classes = r.Integer<int>("num_classes", d.num_classes);
    d.input_dim = r.Integer<std::size_t>("input_dim", d.input_dim);
    d.samples_per_class =
        r.Integer<std::size_t>("samples_per_class", d.samples_per_class);
    d.test_samples_per_class = r.Integer<std::size_t>(
        "test_samples_per_class", d.test_samples_per_class);
    d.spread = r.Real("spread", d.spread);
    if (r.Has("seed")) d.seed = r.Integer<std::uint64_t>("seed", 0);
    r.Raw("seed");
    Require(d.num_classes >= 2, "dataset.num_classes", "must be >= 2");
    Require(d.input_dim >= 1, "dataset.input_dim", "must be >= 1");
    Require(d.samples_per_class >= 1, "dataset.samples_per_class",
            "must be >= 1");
    Require(d.test_samples_per_class >= 1, "dataset.test_samples_per_class",
            "must be >= 1");
    Require(d.spread >= 0.0, "dataset.spread", "must be >= 0");
  } else if (kind == "idx") {
    d.kind = DatasetKind::kIdx;
    d.num_classes = r.Integer<int>("num_classes", 10);
    d.train_images = r.String("train_images", "");
    d.train_labels = r.String("train_labels", "");
    d.test_images = r.String("test_images", "");
    d.test_labels = r.String("test_labels", "");
    Require(d.num_classes >= 2, "dataset.num_classes", "must be >= 2");
    for (const char* key :
         {"train_images", "train_labels", "test_images", "test_labels"}) {
      Require(!r.String(key, "").empty(), std::string("dataset.") + key,
              "required for idx datasets");
    }
  } else {
    throw ConfigError("dataset.kind", "expected blobs|idx, got '" + kind + "'");
  }
  r.Finish();
  return d;
}

}  // namespace

RunConfig ParseConfig(const json& doc) {
  ObjectReader root(doc, "");
  RunConfig out;
  ExperimentConfig& cfg = out.experiment;

  if (!root.Has("model")) throw ConfigError("model", "required");
  if (!root.Has("rounds")) throw ConfigError("rounds", "required");

  out.dataset = ParseDataset(root.Raw("dataset"));

  {
    ObjectReader m(*root.Raw("model"), "model");
    cfg.model.kind = Enum(m, "kind", "logistic", ParseModelKind);
    cfg.model.hidden_dim = m.Integer<std::size_t>(
        "hidden_dim", cfg.model.kind == ModelKind::kMlp ? 32 : 0);
    const bool blobs = out.dataset.kind == DatasetKind::kBlobs;
    const std::size_t data_dim = blobs ? out.dataset.input_dim : 0;
    cfg.model.input_dim = m.Integer<std::size_t>("input_dim", data_dim);
    cfg.model.num_classes =
        m.Integer<int>("num_classes", out.dataset.num_classes);
    if (blobs) {
      Require(cfg.model.input_dim == out.dataset.input_dim, "model.input_dim",
              "must match dataset.input_dim");
    }
    Require(cfg.model.num_classes == out.dataset.num_classes,
            "model.num_classes", "must match dataset.num_classes");
    if (cfg.model.kind == ModelKind::kMlp) {
      Require(cfg.model.hidden_dim >= 1, "model.hidden_dim", "must be >= 1");
    } else {
      Require(cfg.model.hidden_dim == 0, "model.hidden_dim",
              "only valid for mlp models");
    }
    m.Finish();
  }

  cfg.rounds = root.Integer<int>("rounds", 0);
  cfg.num_clients = root.Integer<int>("clients", 10);
  cfg.clients_per_round =
      root.Integer<int>("clients_per_round", cfg.num_clients);
  cfg.local_epochs = root.Integer<int>("local_epochs", 5);
  cfg.batch_size = root.Integer<int>("batch_size", 64);
  cfg.learning_rate = root.Real("learning_rate", 0.1);
  cfg.seed = root.Integer<std::uint64_t>("seed", 0);
  cfg.eval_every = root.Integer<int>("eval_every", 10);

  if (const json* s = root.Raw("schedule")) {
    ObjectReader r(*s, "schedule");
    cfg.schedule.mode = Enum(r, "mode", "fp32", ParseScheduleMode);
    cfg.schedule.static_bits = r.Integer<int>("bits", 32);
    cfg.schedule.b_max = r.Integer<int>("b_max", 32);
    cfg.schedule.b_min = r.Integer<int>("b_min", 8);
    cfg.schedule.lambda_h = r.Real("lambda_h", 0.5);
    r.Finish();
  }
  cfg.schedule.total_rounds = std::max(cfg.rounds, 1);

  if (const json* p = root.Raw("privacy")) {
    ObjectReader r(*p, "privacy");
    DpConfig dp;
    Require(r.Has("epsilon"), "privacy.epsilon", "required");
    dp.epsilon = r.Real("epsilon", 0.0);
    dp.xi = r.Real("clip_bound", 100.0);
    r.Finish();
    cfg.dp = dp;
  }

  if (const json* p = root.Raw("partition")) {
    ObjectReader r(*p, "partition");
    cfg.partition.kind = Enum(r, "kind", "dirichlet", ParsePartitionKind);
    cfg.partition.alpha = r.Real("alpha", 0.5);
    cfg.partition.exponent = r.Real("exponent", 1.2);
    r.Finish();
  }
  root.Finish();

  // Validate with placeholder dims when they only become known at load time.
  ExperimentConfig check = cfg;
  if (check.model.input_dim == 0) check.model.input_dim = 1;
  check.Validate();
  return out;
}

RunConfig ParseConfigString(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  return ParseConfig(doc);
}

RunConfig ParseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfigString(ss.str());
}

json ToJson(const RunConfig& rc) {
  const ExperimentConfig& c = rc.experiment;
  json model = {{"kind", ToString(c.model.kind)},
                {"num_classes", c.model.num_classes}};
  if (c.model.input_dim > 0) model["input_dim"] = c.model.input_dim;
  if (c.model.kind == ModelKind::kMlp) model["hidden_dim"] = c.model.hidden_dim;

  json schedule = {{"mode", ToString(c.schedule.mode)},
                   {"bits", c.schedule.static_bits},
                   {"b_max", c.schedule.b_max},
                   {"b_min", c.schedule.b_min},
                   {"lambda_h", c.schedule.lambda_h}};

  json partition = {{"kind", ToString(c.partition.kind)},
                    {"alpha", c.partition.alpha},
                    {"exponent", c.partition.exponent}};

  json dataset;
  const DatasetConfig& d = rc.dataset;
  if (d.kind == DatasetKind::kBlobs) {
    dataset = {{"kind", "blobs"},
               {"num_classes", d.num_classes},
               {"input_dim", d.input_dim},
               {"samples_per_class", d.samples_per_class},
               {"test_samples_per_class", d.test_samples_per_class},
               {"spread", d.spread}};
    if (d.seed) dataset["seed"] = *d.seed;
  } else {
    dataset = {{"kind", "idx"},
               {"num_classes", d.num_classes},
               {"train_images", d.train_images},
               {"train_labels", d.train_labels},
               {"test_images", d.test_images},
               {"test_labels", d.test_labels}};
  }

  json doc = {{"model", model},
              {"rounds", c.rounds},
              {"clients", c.num_clients},
              {"clients_per_round", c.clients_per_round},
              {"local_epochs", c.local_epochs},
              {"batch_size", c.batch_size},
              {"learning_rate", c.learning_rate},
              {"seed", c.seed},
              {"eval_every", c.eval_every},
              {"schedule", schedule},
              {"partition", partition},
              {"dataset", dataset}};
  doc["privacy"] = c.dp ? json{{"epsilon", c.dp->epsilon},
                               {"clip_bound", c.dp->xi}}
                        : json(nullptr);
  return doc;
}

Datasets PrepareData(RunConfig& rc) {
  const DatasetConfig& d = rc.dataset;
  ExperimentConfig& cfg = rc.experiment;
  Datasets out;
  if (d.kind == DatasetKind::kBlobs) {
    const std::uint64_t seed = d.seed.value_or(cfg.seed);
    Rng train_rng = MakeRng(seed, Stream::kData);
    Rng test_rng = MakeRng(seed, Stream::kTestData);
    out.train = SyntheticBlobs(d.num_classes, d.input_dim, d.samples_per_class,
                               d.spread, train_rng);
    out.test = SyntheticBlobs(d.num_classes, d.input_dim,
                              d.test_samples_per_class, d.spread, test_rng);
  } else {
    out.train = LoadIdx(d.train_images, d.train_labels, d.num_classes);
    out.test = LoadIdx(d.test_images, d.test_labels, d.num_classes);
    if (out.test.input_dim() != out.train.input_dim()) {
      throw ConfigError("dataset", "train and test images differ in size");
    }
  }
  if (cfg.model.input_dim == 0) cfg.model.input_dim = out.train.input_dim();
  Require(cfg.model.input_dim == out.train.input_dim(), "model.input_dim",
          "must match the dataset's input dimension (" +
              std::to_string(out.train.input_dim()) + ")");
  Require(cfg.model.num_classes == out.train.num_classes(),
          "model.num_classes", "must match the dataset");
  return out;
}

}  // namespace fedq

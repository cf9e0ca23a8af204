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

// Synchronous FedAvg with quantized links and local Laplace DP.
//
// Each round t:
//   1. the server samples P of N clients uniformly without replacement;
//   2. quantizes the global model at the server bit-length b_t and
//      broadcasts it (P copies metered on the downlink);
//   3. every selected client dequantizes, runs E epochs of SGD over
//      B-sized batches (gradients L1-clipped at xi when DP is on), adds
//      Laplace noise, picks its own bit-length and quantizes its model;
//   4. the server dequantizes the uploads and averages them weighted by
//      local dataset size.
//
// Randomness is drawn from streams keyed by (seed, purpose, round, client),
// so a run is reproducible bit-for-bit and clients can train on any number
// of threads.

#ifndef FEDQ_FEDERATION_H_
#define FEDQ_FEDERATION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fedq/dataset.h"
#include "fedq/model.h"
#include "fedq/partition.h"
#include "fedq/privacy.h"
#include "fedq/quantizer.h"
#include "fedq/rng.h"
#include "fedq/scheduler.h"
#include "fedq/tensor.h"

namespace fedq {

// Per-tensor wire overhead on top of the b-bit codes.
inline constexpr std::int64_t kScaleBits = 32;
inline constexpr std::int64_t kBitTagBits = 8;
inline constexpr std::int64_t kFloat32Bits = 32;

enum class PartitionKind { kDirichlet, kPowerLaw };

std::string ToString(PartitionKind kind);
PartitionKind ParsePartitionKind(const std::string& s);

struct PartitionConfig {
  PartitionKind kind = PartitionKind::kDirichlet;
  double alpha = 0.5;     // dirichlet
  double exponent = 1.2;  // power law

  friend bool operator==(const PartitionConfig&,
                         const PartitionConfig&) = default;
};

struct ExperimentConfig {
  ModelSpec model;
  ScheduleConfig schedule;
  std::optional<DpConfig> dp;  // nullopt: no clipping, no noise
  int rounds = 1;
  int num_clients = 10;
  int clients_per_round = 10;
  int local_epochs = 5;
  int batch_size = 64;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  PartitionConfig partition;
  int eval_every = 10;

  // Throws ConfigError naming the first violated constraint.
  void Validate() const;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// What travels on a link: quantized codes, or raw float32 parameters when
// the schedule is fp32.
using Payload = std::variant<QuantizedParamSet, ParamSet>;

ParamSet Decode(const Payload& payload);

// sum over tensors of elements * b + kScaleBits + kBitTagBits.
std::int64_t CommCost(const QuantizedParamSet& q);
// sum over tensors of elements * 32.
std::int64_t Float32Cost(const ParamSet& p);
std::int64_t PayloadBits(const Payload& payload);

struct ClientUpdate {
  int client_id = 0;
  Payload payload;
  std::int64_t n = 0;  // local dataset size
  int bits = 32;       // uplink bit-length (32 for fp32)
  double nu = 1.0;     // importance score used for the bit-length
  double lipschitz = 0.0;
  double noise_scale = 0.0;
};

struct ClientContext {
  int client_id = 0;
  const LabeledDataset* data = nullptr;
  const IndexList* indices = nullptr;
};

// E epochs of SGD over consecutive B-sized batches of `indices` in order
// (the last partial batch is kept). Gradients are L1-clipped at `clip` when
// set. When `trace` is non-null the raw gradient and the parameters it was
// taken at are recorded for every batch.
ParamSet LocalTrain(const ModelSpec& spec, ParamSet params,
                    const LabeledDataset& data, const IndexList& indices,
                    int epochs, int batch_size, double eta,
                    std::optional<double> clip, BatchTrace* trace);

// One client's work for round t. `n_max` is the largest dataset among the
// clients selected this round. Throws ConfigError when the client has no
// samples.
ClientUpdate RunClient(const Payload& global, std::int64_t n_max,
                       const ExperimentConfig& cfg, const ClientContext& client,
                       int t, Rng& noise_rng, Rng& rounding_rng);

// Dataset-size weighted mean of the decoded updates, summed in ascending
// client-id order. Throws ProtocolError for an empty list.
ParamSet Aggregate(const std::vector<ClientUpdate>& updates);

// P distinct ids from [0, N), uniformly, sorted ascending.
std::vector<int> SelectClients(int num_clients, int clients_per_round,
                               Rng& rng);

// Fraction of samples whose argmax prediction matches the label. Throws
// InputError for an empty dataset.
double Evaluate(const ModelSpec& spec, const ParamSet& params,
                const LabeledDataset& data);

struct RoundRecord {
  int t = 0;
  std::vector<int> selected;
  std::int64_t downlink_bits = 0;
  std::int64_t uplink_bits = 0;
  double mean_bits = 0.0;  // mean uplink bit-length over selected clients
  std::optional<double> test_acc;
  std::optional<double> train_acc;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct ExperimentResult {
  std::vector<RoundRecord> records;
  Partition partition;
  ParamSet initial_params;
  ParamSet final_params;
  std::int64_t downlink_bits = 0;
  std::int64_t uplink_bits = 0;

  std::int64_t total_bits() const { return downlink_bits + uplink_bits; }
};

struct RunOptions {
  int threads = 1;
  // Called after every round with the record and the new global model.
  std::function<void(const RoundRecord&, const ParamSet&)> on_round;
};

// Partitions `train`, initializes the model and runs cfg.rounds rounds.
// Accuracy is recorded after rounds t with (t + 1) % eval_every == 0 and
// after the final round.
ExperimentResult RunExperiment(const ExperimentConfig& cfg,
                               const LabeledDataset& train,
                               const LabeledDataset& test,
                               const RunOptions& options = {});

// The partition RunExperiment uses for this config.
Partition MakePartition(const ExperimentConfig& cfg,
                        const LabeledDataset& train);

// index of the record with the highest test accuracy (first on ties).
std::optional<std::size_t> BestRecord(const std::vector<RoundRecord>& records);

}  // namespace fedq

#endif  // FEDQ_FEDERATION_H_

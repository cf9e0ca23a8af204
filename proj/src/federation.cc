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

#include "fedq/federation.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "fedq/errors.h"
#include "fedq/optim.h"

namespace fedq {

std::string ToString(PartitionKind kind) {
  return kind == PartitionKind::kDirichlet ? "dirichlet" : "power_law";
}

PartitionKind ParsePartitionKind(const std::string& s) {
  if (s == "dirichlet") return PartitionKind::kDirichlet;
  if (s == "power_law") return PartitionKind::kPowerLaw;
  throw InputError("unknown partition kind '" + s +
                   "' (expected dirichlet|power_law)");
}

void ExperimentConfig::Validate() const {
  try {
    model.Validate();
  } catch (const InputError& e) {
    throw ConfigError("model", e.what());
  }
  if (rounds < 0) throw ConfigError("rounds", "must be >= 0");
  if (num_clients < 1) throw ConfigError("clients", "must be >= 1");
  if (clients_per_round < 1) {
    throw ConfigError("clients_per_round", "must be >= 1");
  }
  if (clients_per_round > num_clients) {
    throw ConfigError("clients_per_round",
                      "must be <= clients (P <= N), got P=" +
                          std::to_string(clients_per_round) +
                          " N=" + std::to_string(num_clients));
  }
  if (local_epochs < 1) throw ConfigError("local_epochs", "must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size", "must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw ConfigError("learning_rate", "must be > 0");
  }
  if (eval_every < 1) throw ConfigError("eval_every", "must be >= 1");
  if (partition.kind == PartitionKind::kDirichlet && !(partition.alpha > 0.0)) {
    throw ConfigError("partition.alpha", "must be > 0");
  }
  if (partition.kind == PartitionKind::kPowerLaw &&
      !(partition.exponent >= 0.0)) {
    throw ConfigError("partition.exponent", "must be >= 0");
  }
  ScheduleConfig sched = schedule;
  sched.total_rounds = std::max(rounds, 1);
  sched.Validate();
  if (dp) {
    if (!(dp->epsilon > 0.0)) {
      throw ConfigError("privacy.epsilon", "must be > 0");
    }
    if (!(dp->xi > 0.0)) throw ConfigError("privacy.clip_bound", "must be > 0");
  }
}

ParamSet Decode(const Payload& payload) {
  if (const auto* q = std::get_if<QuantizedParamSet>(&payload)) {
    return DequantizeParams(*q);
  }
  return std::get<ParamSet>(payload);
}

std::int64_t CommCost(const QuantizedParamSet& q) {
  std::int64_t bits = 0;
  for (const auto& e : q.entries) {
    bits += static_cast<std::int64_t>(e.tensor.codes.size()) * e.tensor.bits +
            kScaleBits + kBitTagBits;
  }
  return bits;
}

std::int64_t Float32Cost(const ParamSet& p) {
  return static_cast<std::int64_t>(p.NumElements()) * kFloat32Bits;
}

std::int64_t PayloadBits(const Payload& payload) {
  if (const auto* q = std::get_if<QuantizedParamSet>(&payload)) {
    return CommCost(*q);
  }
  return Float32Cost(std::get<ParamSet>(payload));
}

ParamSet LocalTrain(const ModelSpec& spec, ParamSet params,
                    const LabeledDataset& data, const IndexList& indices,
                    int epochs, int batch_size, double eta,
                    std::optional<double> clip, BatchTrace* trace) {
  const std::size_t b = static_cast<std::size_t>(batch_size);
  const std::span<const std::size_t> all(indices);
  for (int e = 0; e < epochs; ++e) {
    if (trace) trace->epochs.emplace_back();
    for (std::size_t start = 0; start < all.size(); start += b) {
      const auto batch = all.subspan(start, std::min(b, all.size() - start));
      auto lg = LossAndGrad(spec, params, data, batch);
      if (trace) trace->epochs.back().push_back({lg.grad, params});
      if (clip) lg.grad = ClipGradientL1(lg.grad, *clip);
      params = SgdStep(params, lg.grad, eta);
    }
  }
  return params;
}

ClientUpdate RunClient(const Payload& global, std::int64_t n_max,
                       const ExperimentConfig& cfg, const ClientContext& client,
                       int t, Rng& noise_rng, Rng& rounding_rng) {
  if (client.indices == nullptr || client.indices->empty()) {
    throw ConfigError("partition", "client " +
                                       std::to_string(client.client_id) +
                                       " has no samples");
  }
  const auto n = static_cast<std::int64_t>(client.indices->size());
  ClientUpdate up;
  up.client_id = client.client_id;
  up.n = n;

  BatchTrace trace;
  std::optional<double> clip;
  if (cfg.dp) clip = cfg.dp->xi;
  ParamSet params = LocalTrain(cfg.model, Decode(global), *client.data,
                               *client.indices, cfg.local_epochs,
                               cfg.batch_size, cfg.learning_rate, clip,
                               cfg.dp ? &trace : nullptr);

  if (cfg.dp) {
    up.lipschitz = LipschitzEstimate(trace);
    const double sens = Sensitivity({up.lipschitz, cfg.learning_rate,
                                     cfg.local_epochs, n, cfg.dp->xi});
    up.noise_scale =
        NoiseScale(sens, *cfg.dp,
                   {cfg.clients_per_round, std::max(cfg.rounds, 1),
                    cfg.num_clients, cfg.local_epochs});
    params = Perturb(params, LaplaceNoise(up.noise_scale, params, noise_rng));
  }

  ScheduleConfig sched = cfg.schedule;
  sched.total_rounds = std::max(cfg.rounds, 1);
  switch (sched.mode) {
    case ScheduleMode::kFloat32:
      up.bits = static_cast<int>(kFloat32Bits);
      up.payload = std::move(params);
      return up;
    case ScheduleMode::kDynamic: {
      ImportanceInputs imp{LabelHistogram(*client.data, *client.indices), n,
                           n_max, cfg.model.num_classes};
      up.nu = ClientImportance(imp, sched.lambda_h);
      up.bits = ScheduleBits(sched, t, imp);
      break;
    }
    case ScheduleMode::kStatic:
    case ScheduleMode::kCosine:
      up.bits = ScheduleBits(sched, t, std::nullopt);
      break;
  }
  up.payload = QuantizeParams(params, up.bits, rounding_rng);
  return up;
}

ParamSet Aggregate(const std::vector<ClientUpdate>& updates) {
  if (updates.empty()) throw ProtocolError("aggregate: no client updates");
  std::vector<const ClientUpdate*> order;
  for (const auto& u : updates) order.push_back(&u);
  std::sort(order.begin(), order.end(),
            [](const ClientUpdate* a, const ClientUpdate* b) {
              return a->client_id < b->client_id;
            });
  std::int64_t total = 0;
  for (const auto* u : order) {
    if (u->n < 1) throw ProtocolError("aggregate: update with n_i < 1");
    total += u->n;
  }
  ParamSet out;
  for (const auto* u : order) {
    const ParamSet p = Decode(u->payload);
    const double w = static_cast<double>(u->n) / static_cast<double>(total);
    if (out.empty()) {
      out = ZerosLike(p);
    } else if (!Conformable(out, p)) {
      throw ProtocolError("aggregate: client updates are not conformable");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto dst = out[i].tensor.mutable_values();
      auto src = p[i].tensor.values();
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += w * src[j];
    }
  }
  return out;
}

std::vector<int> SelectClients(int num_clients, int clients_per_round,
                               Rng& rng) {
  if (clients_per_round < 0 || clients_per_round > num_clients) {
    throw InputError("select_clients: need 0 <= P <= N");
  }
  std::vector<int> ids(static_cast<std::size_t>(num_clients));
  for (int i = 0; i < num_clients; ++i) ids[static_cast<std::size_t>(i)] = i;
  // Partial Fisher-Yates: the first P slots become a uniform sample.
  for (int i = 0; i < clients_per_round; ++i) {
    const auto remaining = static_cast<std::uint64_t>(num_clients - i);
    const auto j = static_cast<std::size_t>(i) +
                   static_cast<std::size_t>(rng() % remaining);
    std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
  }
  ids.resize(static_cast<std::size_t>(clients_per_round));
  std::sort(ids.begin(), ids.end());
  return ids;
}

double Evaluate(const ModelSpec& spec, const ParamSet& params,
                const LabeledDataset& data) {
  if (data.empty()) throw InputError("evaluate: empty dataset");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (Predict(spec, params, data.row(i)) == data.label(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

Partition MakePartition(const ExperimentConfig& cfg,
                        const LabeledDataset& train) {
  Rng rng = MakeRng(cfg.seed, Stream::kPartition);
  if (cfg.partition.kind == PartitionKind::kDirichlet) {
    return DirichletPartition(train.labels(), cfg.num_clients,
                              cfg.partition.alpha, rng);
  }
  return PowerLawTwoClassPartition(train.labels(), cfg.num_clients,
                                   cfg.partition.exponent, rng);
}

std::optional<std::size_t> BestRecord(const std::vector<RoundRecord>& records) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].test_acc) continue;
    if (!best || *records[i].test_acc > *records[*best].test_acc) best = i;
  }
  return best;
}

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers. The first exception
// is rethrown on the caller's thread.
template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

ExperimentResult RunExperiment(const ExperimentConfig& cfg,
                               const LabeledDataset& train,
                               const LabeledDataset& test,
                               const RunOptions& options) {
  cfg.Validate();
  if (train.input_dim() != cfg.model.input_dim ||
      train.num_classes() != cfg.model.num_classes) {
    throw ConfigError("model", "input_dim/num_classes do not match the "
                               "training data");
  }
  if (test.input_dim() != train.input_dim()) {
    throw ConfigError("dataset", "train and test input_dim differ");
  }

  ExperimentResult result;
  result.partition = MakePartition(cfg, train);
  {
    Rng init = MakeRng(cfg.seed, Stream::kInit);
    result.initial_params = InitParams(cfg.model, init);
  }
  ParamSet global = result.initial_params;

  ScheduleConfig sched = cfg.schedule;
  sched.total_rounds = std::max(cfg.rounds, 1);

  for (int t = 0; t < cfg.rounds; ++t) {
    const auto ut = static_cast<std::uint64_t>(t);
    RoundRecord rec;
    rec.t = t;
    {
      Rng sel = MakeRng(cfg.seed, Stream::kSelect, ut);
      rec.selected = SelectClients(cfg.num_clients, cfg.clients_per_round, sel);
    }

    Payload down;
    if (sched.mode == ScheduleMode::kFloat32) {
      down = global;
    } else {
      Rng rng = MakeRng(cfg.seed, Stream::kDownlink, ut);
      down = QuantizeParams(global, ServerBits(sched, t), rng);
    }
    rec.downlink_bits =
        static_cast<std::int64_t>(rec.selected.size()) * PayloadBits(down);

    std::int64_t n_max = 0;
    for (int id : rec.selected) {
      n_max = std::max<std::int64_t>(
          n_max, static_cast<std::int64_t>(
                     result.partition.assignments[static_cast<std::size_t>(id)]
                         .size()));
    }

    std::vector<ClientUpdate> updates(rec.selected.size());
    ParallelFor(rec.selected.size(), options.threads, [&](std::size_t k) {
      const int id = rec.selected[k];
      const auto uid = static_cast<std::uint64_t>(id);
      Rng noise = MakeRng(cfg.seed, Stream::kClientNoise, ut, uid);
      Rng rounding = MakeRng(cfg.seed, Stream::kClientRounding, ut, uid);
      ClientContext ctx{
          id, &train,
          &result.partition.assignments[static_cast<std::size_t>(id)]};
      updates[k] = RunClient(down, n_max, cfg, ctx, t, noise, rounding);
    });

    double bit_sum = 0.0;
    for (const auto& u : updates) {
      rec.uplink_bits += PayloadBits(u.payload);
      bit_sum += u.bits;
    }
    rec.mean_bits = bit_sum / static_cast<double>(updates.size());
    global = Aggregate(updates);

    if ((t + 1) % cfg.eval_every == 0 || t + 1 == cfg.rounds) {
      rec.test_acc = Evaluate(cfg.model, global, test);
      rec.train_acc = Evaluate(cfg.model, global, train);
    }
    result.downlink_bits += rec.downlink_bits;
    result.uplink_bits += rec.uplink_bits;
    if (options.on_round) options.on_round(rec, global);
    result.records.push_back(std::move(rec));
  }
  result.final_params = std::move(global);
  return result;
}

}  // namespace fedq

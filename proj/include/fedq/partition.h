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

// Non-IID client partitioners.

#ifndef FEDQ_PARTITION_H_
#define FEDQ_PARTITION_H_

#include <span>
#include <vector>

#include "fedq/dataset.h"
#include "fedq/rng.h"

namespace fedq {

// assignments[i] lists the sample indices owned by client i. Lists are
// pairwise disjoint and every client owns at least one sample.
struct Partition {
  std::vector<IndexList> assignments;

  std::size_t num_clients() const { return assignments.size(); }
};

// For every class, draws client proportions from Dirichlet(alpha, ..., alpha)
// and cuts the (shuffled) class indices accordingly. Every client is then
// topped up to one sample by taking from the largest client, and each
// client's list is shuffled once. Throws InputError for N < 1, alpha <= 0 or
// fewer samples than clients.
Partition DirichletPartition(std::span<const int> labels, int num_clients,
                             double alpha, Rng& rng);

// Every client holds exactly two classes: client i takes the i-th
// (mod C(K,2)) class pair in lexicographic order over the classes present.
// Client sizes follow floor(M * (i+1)^-exponent / sum_r (r+1)^-exponent),
// at least 2, with M the largest budget the per-class supply allows; half of
// each client's samples come from each of its classes. Throws InputError for
// N < 1, fewer than two classes or too few samples for two per client.
Partition PowerLawTwoClassPartition(std::span<const int> labels,
                                    int num_clients, double exponent,
                                    Rng& rng);

}  // namespace fedq

#endif  // FEDQ_PARTITION_H_

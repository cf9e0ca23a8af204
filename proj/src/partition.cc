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

#include "fedq/partition.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "fedq/errors.h"

namespace fedq {
namespace {

void Shuffle(IndexList& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

// Sample indices grouped by label, ascending label order.
std::map<int, IndexList> GroupByClass(std::span<const int> labels) {
  std::map<int, IndexList> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw InputError("partition: negative label");
    groups[labels[i]].push_back(i);
  }
  return groups;
}

}  // namespace

Partition DirichletPartition(std::span<const int> labels, int num_clients,
                             double alpha, Rng& rng) {
  if (num_clients < 1) throw InputError("partition: need at least 1 client");
  if (!(alpha > 0.0)) throw InputError("dirichlet partition: alpha must be > 0");
  if (labels.size() < static_cast<std::size_t>(num_clients)) {
    throw InputError("dirichlet partition: " + std::to_string(labels.size()) +
                     " samples cannot cover " + std::to_string(num_clients) +
                     " clients");
  }
  const std::size_t n_clients = static_cast<std::size_t>(num_clients);
  Partition part;
  part.assignments.resize(n_clients);

  std::gamma_distribution<double> gamma(alpha, 1.0);
  for (auto& [label, idx] : GroupByClass(labels)) {
    Shuffle(idx, rng);
    std::vector<double> props(n_clients);
    double sum = 0.0;
    for (double& p : props) {
      p = gamma(rng);
      sum += p;
    }
    if (!(sum > 0.0)) {
      std::fill(props.begin(), props.end(), 1.0);
      sum = static_cast<double>(n_clients);
    }
    const double n_c = static_cast<double>(idx.size());
    double cum = 0.0;
    std::size_t begin = 0;
    for (std::size_t j = 0; j < n_clients; ++j) {
      cum += props[j];
      std::size_t end = j + 1 == n_clients
                            ? idx.size()
                            : static_cast<std::size_t>(
                                  std::floor(cum / sum * n_c));
      end = std::clamp(end, begin, idx.size());
      part.assignments[j].insert(part.assignments[j].end(),
                                 idx.begin() + static_cast<std::ptrdiff_t>(begin),
                                 idx.begin() + static_cast<std::ptrdiff_t>(end));
      begin = end;
    }
  }

  for (auto& client : part.assignments) {
    if (!client.empty()) continue;
    auto largest = std::max_element(
        part.assignments.begin(), part.assignments.end(),
        [](const IndexList& a, const IndexList& b) {
          return a.size() < b.size();
        });
    client.push_back(largest->back());
    largest->pop_back();
  }
  for (auto& client : part.assignments) Shuffle(client, rng);
  return part;
}

Partition PowerLawTwoClassPartition(std::span<const int> labels,
                                    int num_clients, double exponent,
                                    Rng& rng) {
  if (num_clients < 1) throw InputError("partition: need at least 1 client");
  if (!std::isfinite(exponent)) {
    throw InputError("power-law partition: exponent must be finite");
  }
  auto groups = GroupByClass(labels);
  if (groups.size() < 2) {
    throw InputError("power-law partition: need at least 2 classes present");
  }
  std::vector<int> classes;
  for (const auto& [label, idx] : groups) classes.push_back(label);

  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < classes.size(); ++a) {
    for (std::size_t b = a + 1; b < classes.size(); ++b) {
      pairs.emplace_back(classes[a], classes[b]);
    }
  }

  const std::size_t n_clients = static_cast<std::size_t>(num_clients);
  std::vector<double> weights(n_clients);
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < n_clients; ++i) {
    weights[i] = std::pow(static_cast<double>(i + 1), -exponent);
    weight_sum += weights[i];
  }

  auto sizes_for = [&](std::size_t budget) {
    std::vector<std::size_t> s(n_clients);
    for (std::size_t i = 0; i < n_clients; ++i) {
      s[i] = std::max<std::size_t>(
          2, static_cast<std::size_t>(std::floor(
                 static_cast<double>(budget) * weights[i] / weight_sum)));
    }
    return s;
  };
  auto feasible = [&](const std::vector<std::size_t>& s) {
    std::map<int, std::size_t> demand;
    for (std::size_t i = 0; i < n_clients; ++i) {
      const auto& [first, second] = pairs[i % pairs.size()];
      demand[first] += s[i] - s[i] / 2;
      demand[second] += s[i] / 2;
    }
    for (const auto& [label, need] : demand) {
      if (need > groups[label].size()) return false;
    }
    return true;
  };

  if (!feasible(sizes_for(0))) {
    throw InputError(
        "power-law partition: not enough samples to give every client two "
        "samples from each of its class pair");
  }
  // Feasibility is monotone in the budget; find the largest feasible one.
  std::size_t lo = 0, hi = labels.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (feasible(sizes_for(mid))) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  const auto sizes = sizes_for(lo);

  for (auto& [label, idx] : groups) Shuffle(idx, rng);
  std::map<int, std::size_t> cursor;
  Partition part;
  part.assignments.resize(n_clients);
  auto take = [&](int label, std::size_t count, IndexList& dst) {
    auto& pos = cursor[label];
    const auto& pool = groups[label];
    dst.insert(dst.end(), pool.begin() + static_cast<std::ptrdiff_t>(pos),
               pool.begin() + static_cast<std::ptrdiff_t>(pos + count));
    pos += count;
  };
  for (std::size_t i = 0; i < n_clients; ++i) {
    const auto& [first, second] = pairs[i % pairs.size()];
    take(first, sizes[i] - sizes[i] / 2, part.assignments[i]);
    take(second, sizes[i] / 2, part.assignments[i]);
    Shuffle(part.assignments[i], rng);
  }
  return part;
}

}  // namespace fedq

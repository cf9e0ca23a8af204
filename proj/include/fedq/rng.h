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

// Seeded random streams.
//
// A simulation has a single root seed. Every consumer of randomness gets its
// own generator seeded from (root, purpose, round, client) through a
// SplitMix64 finalizer chain, so results do not depend on the order in which
// clients are executed and client work can run on any thread.

#ifndef FEDQ_RNG_H_
#define FEDQ_RNG_H_

#include <cstdint>
#include <random>

namespace fedq {

using Rng = std::mt19937_64;

enum class Stream : std::uint64_t {
  kInit = 1,
  kPartition = 2,
  kSelect = 3,
  kDownlink = 4,
  kClientNoise = 5,
  kClientRounding = 6,
  kData = 7,
  kTestData = 8,
};

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t root, Stream stream,
                                std::uint64_t round = 0,
                                std::uint64_t client = 0) {
  std::uint64_t h = SplitMix64(root);
  h = SplitMix64(h ^ static_cast<std::uint64_t>(stream));
  h = SplitMix64(h ^ round);
  h = SplitMix64(h ^ client);
  return h;
}

inline Rng MakeRng(std::uint64_t root, Stream stream, std::uint64_t round = 0,
                   std::uint64_t client = 0) {
  return Rng(DeriveSeed(root, stream, round, client));
}

// Uniform double in [0, 1) with 53 random bits. Unlike
// std::uniform_real_distribution the bit pattern is fixed across standard
// libraries.
inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace fedq

#endif  // FEDQ_RNG_H_

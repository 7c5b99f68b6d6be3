// Copyright 2026 The lpginv Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LPGINV_RNG_HPP
#define LPGINV_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lpginv/dense_matrix.hpp"

namespace lpginv {

// Counter-based generator: the k-th 64-bit word of the stream is
// SplitMix64(seed + k * golden). Normals come from Box-Muller, pairwise.
// Streams are reproducible within a build; there is no cross-language
// bit-compatibility promise.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t NextU64();
  // Uniform on the open interval (0, 1).
  double Uniform();
  double Normal();
  // Uniform integer in [0, bound). bound must be positive.
  std::size_t UniformIndex(std::size_t bound);
  // k distinct indices drawn uniformly from [0, n), in draw order.
  std::vector<std::size_t> Subset(std::size_t n, std::size_t k);

  // Independent child stream for task `index`.
  SeededRng Split(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t MixSeed(std::uint64_t parent, std::uint64_t index);

// m x n matrix of iid standard normals, filled row by row.
DenseMatrix GaussianMatrix(SeededRng& rng, std::size_t m, std::size_t n);

}  // namespace lpginv

#endif  // LPGINV_RNG_HPP

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

#include "lpginv/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "lpginv/error.hpp"

namespace lpginv {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t SplitMix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t MixSeed(std::uint64_t parent, std::uint64_t index) {
  return SplitMix64(SplitMix64(parent) ^ SplitMix64(index + kGolden));
}

std::uint64_t SeededRng::NextU64() {
  ++counter_;
  return SplitMix64(seed_ + counter_ * kGolden);
}

double SeededRng::Uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
}

double SeededRng::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = Uniform();
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::size_t SeededRng::UniformIndex(std::size_t bound) {
  if (bound == 0) throw InvalidArgument("UniformIndex bound must be positive");
  const std::uint64_t b = bound;
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return static_cast<std::size_t>(x % b);
}

std::vector<std::size_t> SeededRng::Subset(std::size_t n, std::size_t k) {
  if (k > n) throw InvalidArgument("subset larger than population");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + UniformIndex(n - i)]);
  }
  pool.resize(k);
  return pool;
}

SeededRng SeededRng::Split(std::uint64_t index) const {
  return SeededRng(MixSeed(seed_, index));
}

DenseMatrix GaussianMatrix(SeededRng& rng, std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) {
    throw DimensionError("gaussian matrix needs positive dimensions");
  }
  std::vector<double> data(m * n);
  for (double& v : data) v = rng.Normal();
  return DenseMatrix(m, n, std::move(data));
}

}  // namespace lpginv

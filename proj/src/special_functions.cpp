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

#include "lpginv/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lpginv/error.hpp"

namespace lpginv {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

void RequireNonNegative(double t) {
  if (!(t >= 0.0)) throw DomainError("theta needs t >= 0, got " + std::to_string(t));
}

}  // namespace

double Erfc(double z) { return std::erfc(z); }

double ErfcInv(double y) {
  if (!(y > 0.0 && y < 2.0)) {
    throw DomainError("erfc_inv needs 0 < y < 2, got " + std::to_string(y));
  }
  if (y == 1.0) return 0.0;
  // erfc is decreasing: keep erfc(lo) >= y >= erfc(hi).
  double lo = -1.0;
  double hi = 1.0;
  while (Erfc(lo) < y) lo *= 2.0;
  while (Erfc(hi) > y) hi *= 2.0;
  double z = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = Erfc(z) - y;
    if (f == 0.0) return z;
    if (f > 0.0) {
      lo = z;
    } else {
      hi = z;
    }
    const double slope = -2.0 / std::sqrt(std::numbers::pi) * std::exp(-z * z);
    double next = slope != 0.0 ? z - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 1e-16 * (1.0 + std::abs(z))) return next;
    z = next;
  }
  return z;
}

double Theta(double t) {
  RequireNonNegative(t);
  return (t * t + 1.0) * Erfc(t / kSqrt2) - kSqrt2OverPi * std::exp(-0.5 * t * t) * t;
}

double ThetaPrime(double t) {
  RequireNonNegative(t);
  return 2.0 * t * Erfc(t / kSqrt2) - 2.0 * kSqrt2OverPi * std::exp(-0.5 * t * t);
}

}  // namespace lpginv

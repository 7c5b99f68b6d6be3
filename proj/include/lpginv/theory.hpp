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

#ifndef LPGINV_THEORY_HPP
#define LPGINV_THEORY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "lpginv/dense_matrix.hpp"

namespace lpginv {

// Query for the concentration point of (n/m) ||X||_F^2 where X minimizes the
// entrywise l^p norm among generalized inverses of an m x n Gaussian matrix,
// delta = (m - 1) / n. An empty n asks for the n -> infinity limit.
struct TheoryQuery {
  double p = 1.0;
  double delta = 0.5;
  std::optional<std::size_t> n;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 20190501;
  // p = 1 only: use E dist^2 / n = theta(t) as a control variate.
  bool theta_control_variate = false;
  // Finite n: how D'(t) enters g(t) = D - (t/2) D' and how g = delta is solved.
  //   kCentralDifference: central difference with step max(1e-3, 1e-2 t),
  //     bisection.
  //   kPathwise: exact derivative of the sample mean (d/dt dist =
  //     -||r||_p / ||r||_2 with r the residual of the projection), regula
  //     falsi. Same target, roughly ten times fewer passes.
  enum class Slope { kCentralDifference, kPathwise };
  Slope slope = Slope::kCentralDifference;

  void Validate() const;
};

enum class TheoryMethod { kClosedFormLimit, kMonteCarloFiniteN };

struct TheoryResult {
  double p = 1.0;
  double delta = 0.5;
  std::optional<std::size_t> n;
  double t_star = 0.0;
  // True when t_star is reported as t* / sqrt(n) (p = 2 limit).
  bool t_star_normalized = false;
  double d_at_tstar = 0.0;
  double alpha_star = 0.0;
  double alpha_star_sq = 0.0;
  TheoryMethod method = TheoryMethod::kClosedFormLimit;
  double stderr_d = 0.0;  // Monte-Carlo standard error of D(t*)
  // Finite n with 1 < p < 2: the derivative lower bound the concentration
  // result assumes is not established for these p.
  bool unverified_hypothesis = false;
};

// Euclidean distance from h to {y : ||y||_{p*} <= t}, p* = p / (p - 1).
double DistToDualBall(const Vector& h, double p, double t);

struct McEstimate {
  double estimate = 0.0;   // (E dist / sqrt n)^2
  double stderr_ = 0.0;    // delta method: 2 mean sd / sqrt(samples)
  double mean_dist = 0.0;  // sample mean of dist / sqrt n
};

// Monte-Carlo estimate of D_p(t; n). The sample stream depends only on
// (seed, n, mc_samples), so estimates at different t share random numbers.
McEstimate MonteCarloD(const TheoryQuery& q, double t);

// Root of D(t) - (t/2) D'(t) = delta. Limit mode: p = 1 gives
// sqrt(2) erfc_inv(delta); p = 2 gives the normalized value 1 - delta.
// Finite n: bisection with Monte-Carlo D on common random numbers.
double TStar(const TheoryQuery& q);

// alpha* = sqrt(D(t*) / (delta (delta - D(t*)))).
TheoryResult AlphaStar(const TheoryQuery& q);

// Closed-form limiting alpha*_1(delta) via t*_1 = sqrt(2) erfc_inv(delta).
double LimitAlphaStarL1(double delta);
// Limiting alpha*_2(delta) = 1 / sqrt(1 - delta).
double LimitAlphaStarL2(double delta);

std::string ToString(TheoryMethod method);
nlohmann::json ToJson(const TheoryResult& result);

// CSV export of theory evaluations.
inline constexpr const char* kTheoryCsvHeader =
    "p,delta,n,t_star,D,alpha_star,alpha_star_sq,stderr";
std::string ToCsvRow(const TheoryResult& result);

}  // namespace lpginv

#endif  // LPGINV_THEORY_HPP

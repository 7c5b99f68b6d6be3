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

#ifndef LPGINV_GENINV_HPP
#define LPGINV_GENINV_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpginv/bp_solver.hpp"
#include "lpginv/dense_matrix.hpp"
#include "lpginv/rng.hpp"

namespace lpginv {

enum class InverseMethod { kMpp, kSpinv, kGinvP, kSubmatrix };

// A generalized inverse X (n x m) of A (m x n) with its diagnostics.
struct GenInverse {
  DenseMatrix x;
  InverseMethod method = InverseMethod::kMpp;
  double p = 2.0;
  std::vector<std::size_t> per_column_support;
  double frobenius_sq = 0.0;
  double entrywise_l1 = 0.0;
  double gen_inverse_residual = 0.0;  // ||A X A - A||_F / ||A||_F
  std::vector<SolveStatus> per_column_status;

  std::size_t TotalSupport() const;
  // True if any column carries kCertifiedNonuniqueRisk.
  bool NonuniqueRisk() const;
  bool AllConverged() const;
  std::string MethodName() const;
};

// Wraps an arbitrary candidate X and computes its diagnostics; statuses
// default to kConverged.
GenInverse MakeGenInverse(const DenseMatrix& a, DenseMatrix x,
                          InverseMethod method, double p,
                          const SolverConfig& config = {});

GenInverse MppInverse(const DenseMatrix& a, const SolverConfig& config = {});

// Column i minimizes ||x||_1 subject to A x = e_i; every column is certified.
GenInverse Spinv(const DenseMatrix& a, const SolverConfig& config = {});

// Column-wise l^p minimization, 1 <= p <= 2. p = 1 is Spinv, p = 2 the MPP.
GenInverse GinvP(const DenseMatrix& a, double p, const SolverConfig& config = {});

// Inverts a uniformly drawn invertible m x m column submatrix and pads with
// zero rows. Gives up after kMaxSingularDraws consecutive singular draws.
inline constexpr int kMaxSingularDraws = 100;
GenInverse SubmatrixInverse(const DenseMatrix& a, SeededRng& rng,
                            const SolverConfig& config = {});
GenInverse SubmatrixInverse(const DenseMatrix& a,
                            const std::vector<std::size_t>& columns,
                            const SolverConfig& config = {});

struct ValidationCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::vector<std::size_t> support_census;
  double gen_inverse_residual = 0.0;
  double right_inverse_residual = 0.0;  // ||A X - I||_F
  double frobenius_sq = 0.0;
  double entrywise_l1 = 0.0;
  bool all_passed = false;
};

// Tolerance applied to ||AXA - A||_F / ||A||_F and ||AX - I||_F.
inline constexpr double kGenInverseTolerance = 1e-6;

ValidationReport Validate(const DenseMatrix& a, const GenInverse& g,
                          const SolverConfig& config = {});

nlohmann::json ToJson(const GenInverse& g);
nlohmann::json ToJson(const ValidationReport& report);

}  // namespace lpginv

#endif  // LPGINV_GENINV_HPP

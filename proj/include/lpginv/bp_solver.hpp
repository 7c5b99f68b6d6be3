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

#ifndef LPGINV_BP_SOLVER_HPP
#define LPGINV_BP_SOLVER_HPP

#include <cstddef>
#include <memory>
#include <string_view>

#include "lpginv/dense_matrix.hpp"
#include "lpginv/linalg.hpp"

namespace lpginv {

struct SolverConfig {
  std::size_t max_iters = 50000;
  double tol_primal = 1e-10;  // relative
  double tol_dual = 1e-10;    // relative
  double splitting_step = 1.0;
  double sparsity_rel_threshold = 1e-8;
  double certificate_margin = 1e-6;
  // p = 1 only: every refine_interval iterations the splitting iterate seeds
  // an exact vertex-exchange refinement limited to refine_pivot_budget pivots.
  std::size_t refine_interval = 200;
  std::size_t refine_pivot_budget = 10;

  // Throws InvalidArgument unless all tolerances are positive and
  // max_iters >= 1.
  void Validate() const;
};

enum class SolveStatus {
  kConverged,
  kMaxIters,
  kCertifiedUnique,
  kCertifiedNonuniqueRisk,
  kNotCertified,
};

std::string_view ToString(SolveStatus status);

// Solution of min ||x||_p subject to A x = b.
struct BpSolution {
  Vector x;
  // Multiplier of the norm-constrained problem, scaled so that A^T dual is a
  // subgradient of ||.||_p at x.
  Vector dual;
  Vector rhs;
  double p = 1.0;
  std::size_t iterations = 0;
  double primal_residual = 0.0;  // ||A x - b||
  double objective = 0.0;        // ||x||_p
  SolveStatus status = SolveStatus::kConverged;
  // Number of distinct minimizers found (enumeration oracle only).
  std::size_t minimizer_count = 1;
};

double LpNorm(const Vector& x, double p);

// argmin_x 1/2 (x - v)^2 + lambda |x|^p for 1 <= p <= 2.
double ProxLpScalar(double v, double lambda, double p);

// Column solver bound to one matrix. The Gram factor is computed once and
// may be shared between solvers; Solve() is const and reentrant.
class BpSolver {
 public:
  BpSolver(const DenseMatrix& a, SolverConfig config);
  BpSolver(const DenseMatrix& a, std::shared_ptr<const GramFactor> gram,
           SolverConfig config);

  BpSolution Solve(const Vector& b, double p) const;

  const DenseMatrix& matrix() const { return a_; }
  const GramFactor& gram() const { return *gram_; }
  const SolverConfig& config() const { return config_; }

 private:
  BpSolution SolveMinNorm(const Vector& b) const;
  BpSolution SolveSplitting(const Vector& b, double p) const;

  DenseMatrix a_;
  std::shared_ptr<const GramFactor> gram_;
  SolverConfig config_;
};

BpSolution SolveBp(const DenseMatrix& a, const Vector& b, double p,
                   const SolverConfig& config = {});

// Largest column count the enumeration oracle accepts.
inline constexpr std::size_t kOracleMaxColumns = 20;

// Ground truth for tiny instances. For p = 1 it enumerates every invertible
// m x m column subset and keeps the cheapest basic solution, reporting ties
// through status kCertifiedNonuniqueRisk and minimizer_count. For p = 2 it
// returns the minimum-norm solution; for 1 < p < 2 it runs the splitting
// solver with tolerances tightened tenfold.
BpSolution SolveOracle(const DenseMatrix& a, const Vector& b, double p);

struct CertificateReport {
  SolveStatus status = SolveStatus::kNotCertified;
  std::size_t support_size = 0;
  bool full_column_rank = false;
  Vector nu;
  double on_support_residual = 0.0;  // ||A_S^T nu - sign(x_S)||_inf
  double max_off_support = 0.0;      // max_{i not in S} |a_i^T nu|
};

// KKT certificate for an l1 solution (p must be 1). Returns
// kCertifiedUnique, kCertifiedNonuniqueRisk or kNotCertified.
CertificateReport CertifyDetailed(const DenseMatrix& a, const BpSolution& sol,
                                  const SolverConfig& config = {});
SolveStatus Certify(const DenseMatrix& a, const BpSolution& sol,
                    const SolverConfig& config = {});

// Indices i with |x_i| > rel_threshold * ||x||_inf.
std::vector<std::size_t> Support(const Vector& x, double rel_threshold);

}  // namespace lpginv

#endif  // LPGINV_BP_SOLVER_HPP

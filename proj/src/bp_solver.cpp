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

#include "lpginv/bp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpginv/error.hpp"

namespace lpginv {
namespace {

void RequireExponent(double p) {
  if (!(p >= 1.0 && p <= 2.0)) {
    throw DomainError("exponent p must lie in [1, 2], got " + std::to_string(p));
  }
}

void RequireShapes(const DenseMatrix& a, const Vector& b) {
  if (static_cast<std::size_t>(b.size()) != a.rows()) {
    throw DimensionError("rhs length " + std::to_string(b.size()) +
                         " does not match " + std::to_string(a.rows()) + " rows");
  }
  if (a.rows() > a.cols()) {
    throw DimensionError("basis pursuit needs rows <= cols");
  }
}

double Sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Exact l1 minimizer reached by vertex exchange from the m largest entries of
// `seed`. Each pivot swaps in the column whose correlation with the current
// dual most exceeds one and drops the first basic variable that hits zero.
struct VertexResult {
  Vector x;
  Vector nu;
  std::size_t pivots = 0;
};

std::optional<VertexResult> RefineVertex(const DenseMatrix& a, const Vector& b,
                                         const Vector& seed,
                                         std::size_t pivot_budget) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m),
                    order.end(), [&](std::size_t i, std::size_t j) {
                      const double vi = std::abs(seed(static_cast<Eigen::Index>(i)));
                      const double vj = std::abs(seed(static_cast<Eigen::Index>(j)));
                      return vi > vj || (vi == vj && i < j);
                    });
  std::vector<std::size_t> basis(order.begin(),
                                 order.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<char> in_basis(n, 0);
  for (std::size_t k : basis) in_basis[k] = 1;

  const auto& values = a.values();
  for (std::size_t pivot = 0;; ++pivot) {
    std::optional<SquareSolver> lu;
    try {
      lu.emplace(SelectColumns(a, basis));
    } catch (const SingularityError&) {
      return std::nullopt;
    }
    const Vector xs = lu->Solve(b);
    const double scale = xs.cwiseAbs().maxCoeff();
    Vector signs(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
      const auto ki = static_cast<Eigen::Index>(k);
      const double value = xs(ki);
      if (std::abs(value) > 1e-14 * scale) {
        signs(ki) = Sign(value);
      } else {
        const double hint = seed(static_cast<Eigen::Index>(basis[k]));
        signs(ki) = hint < 0.0 ? -1.0 : 1.0;
      }
    }
    const Vector nu = lu->SolveTransposed(signs);
    const Vector corr = values.transpose() * nu;

    std::size_t entering = n;
    double worst = 1.0 + 1e-10;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = std::abs(corr(static_cast<Eigen::Index>(i)));
      if (!in_basis[i] && c > worst) {
        worst = c;
        entering = i;
      }
    }
    if (entering == n) {
      VertexResult result;
      result.x = Vector::Zero(static_cast<Eigen::Index>(n));
      for (std::size_t k = 0; k < m; ++k) {
        result.x(static_cast<Eigen::Index>(basis[k])) =
            xs(static_cast<Eigen::Index>(k));
      }
      result.nu = nu;
      result.pivots = pivot;
      return result;
    }
    if (pivot == pivot_budget) return std::nullopt;

    const double direction = Sign(corr(static_cast<Eigen::Index>(entering)));
    const Vector step =
        direction * lu->Solve(values.col(static_cast<Eigen::Index>(entering)));
    std::size_t leaving = m;
    double ratio = std::numeric_limits<double>::infinity();
    const double step_scale = step.cwiseAbs().maxCoeff();
    for (std::size_t k = 0; k < m; ++k) {
      const auto ki = static_cast<Eigen::Index>(k);
      if (signs(ki) * step(ki) <= 1e-14 * step_scale) continue;
      const double t = std::max(0.0, xs(ki) / step(ki));
      if (t < ratio) {
        ratio = t;
        leaving = k;
      }
    }
    if (leaving == m) return std::nullopt;
    in_basis[basis[leaving]] = 0;
    basis[leaving] = entering;
    in_basis[entering] = 1;
  }
}

}  // namespace

void SolverConfig::Validate() const {
  if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (!(tol_primal > 0.0) || !(tol_dual > 0.0)) {
    throw InvalidArgument("solver tolerances must be positive");
  }
  if (!(splitting_step > 0.0)) {
    throw InvalidArgument("splitting_step must be positive");
  }
  if (!(sparsity_rel_threshold > 0.0) || !(certificate_margin > 0.0)) {
    throw InvalidArgument("sparsity threshold and certificate margin must be positive");
  }
  if (refine_interval < 1) throw InvalidArgument("refine_interval must be >= 1");
}

std::string_view ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIters: return "max_iters";
    case SolveStatus::kCertifiedUnique: return "certified_unique";
    case SolveStatus::kCertifiedNonuniqueRisk: return "certified_nonunique_risk";
    case SolveStatus::kNotCertified: return "not_certified";
  }
  return "unknown";
}

double LpNorm(const Vector& x, double p) {
  if (x.size() == 0) return 0.0;
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    sum += std::pow(std::abs(x(i)) / scale, p);
  }
  return scale * std::pow(sum, 1.0 / p);
}

double ProxLpScalar(double v, double lambda, double p) {
  if (!(lambda > 0.0)) {
    throw DomainError("prox parameter lambda must be positive");
  }
  RequireExponent(p);
  const double magnitude = std::abs(v);
  if (p == 1.0) return Sign(v) * std::max(magnitude - lambda, 0.0);
  if (p == 2.0) return v / (1.0 + 2.0 * lambda);
  if (magnitude == 0.0) return 0.0;

  // Root of phi(y) = y + lambda p y^(p-1) - |v| on (0, |v|). phi is increasing
  // and concave, so Newton steps are kept inside a shrinking bracket.
  const double weight = lambda * p;
  double lo = 0.0;
  double hi = magnitude;
  double y = magnitude / (1.0 + weight * std::pow(magnitude, p - 2.0));
  for (int iter = 0; iter < 100; ++iter) {
    const double phi = y + weight * std::pow(y, p - 1.0) - magnitude;
    if (phi > 0.0) {
      hi = y;
    } else {
      lo = y;
    }
    const double dphi = 1.0 + weight * (p - 1.0) * std::pow(y, p - 2.0);
    double next = y - phi / dphi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 1e-16 * magnitude || hi - lo <= 1e-16 * magnitude) {
      y = next;
      break;
    }
    y = next;
  }
  return Sign(v) * y;
}

BpSolver::BpSolver(const DenseMatrix& a, SolverConfig config)
    : BpSolver(a, std::make_shared<const GramFactor>(CholeskyGram(a)), config) {}

BpSolver::BpSolver(const DenseMatrix& a, std::shared_ptr<const GramFactor> gram,
                   SolverConfig config)
    : a_(a), gram_(std::move(gram)), config_(config) {
  config_.Validate();
  if (!gram_ || gram_->size() != a_.rows()) {
    throw DimensionError("Gram factor does not match matrix");
  }
}

BpSolution BpSolver::Solve(const Vector& b, double p) const {
  RequireExponent(p);
  RequireShapes(a_, b);
  if (p == 2.0) return SolveMinNorm(b);
  return SolveSplitting(b, p);
}

BpSolution BpSolver::SolveMinNorm(const Vector& b) const {
  BpSolution sol;
  sol.p = 2.0;
  sol.rhs = b;
  const Vector y = gram_->Solve(b);
  sol.x = a_.values().transpose() * y;
  sol.objective = sol.x.norm();
  sol.dual = sol.objective > 0.0 ? Vector(y / sol.objective)
                                 : Vector::Zero(b.size());
  sol.primal_residual = (a_.values() * sol.x - b).norm();
  sol.status = SolveStatus::kConverged;
  return sol;
}

BpSolution BpSolver::SolveSplitting(const Vector& b, double p) const {
  const auto& values = a_.values();
  const Eigen::Index n = values.cols();
  BpSolution sol;
  sol.p = p;
  sol.rhs = b;
  if (b.norm() == 0.0) {
    sol.x = Vector::Zero(n);
    sol.dual = Vector::Zero(b.size());
    return sol;
  }

  // The program is positively homogeneous in b, so solve it at a scale where
  // the minimum-norm solution has Euclidean norm sqrt(n); this keeps a unit
  // splitting step well matched to the size of the dual variables.
  const Vector min_norm = values.transpose() * gram_->Solve(b);
  const double scale = std::sqrt(static_cast<double>(n)) / min_norm.norm();
  const Vector bs = scale * b;
  const double lambda = 1.0 / config_.splitting_step;
  constexpr double kTiny = 1e-300;

  Vector z = Vector::Zero(n);
  Vector u = Vector::Zero(n);
  Vector x(n);
  Vector v(n);
  Vector z_prev(n);
  std::optional<VertexResult> vertex;
  bool converged = false;
  std::size_t iter = 0;
  while (iter < config_.max_iters) {
    ++iter;
    x = AffineProject(a_, *gram_, bs, z - u);
    v = x + u;
    z_prev = z;
    if (p == 1.0) {
      for (Eigen::Index i = 0; i < n; ++i) {
        z(i) = Sign(v(i)) * std::max(std::abs(v(i)) - lambda, 0.0);
      }
    } else {
      for (Eigen::Index i = 0; i < n; ++i) z(i) = ProxLpScalar(v(i), lambda, p);
    }
    u += x - z;

    const double primal = (x - z).norm();
    const double change = (z - z_prev).norm();
    converged = primal <= config_.tol_primal * std::max({x.norm(), z.norm(), kTiny}) &&
                change <= config_.tol_dual * std::max(z.norm(), kTiny);
    if (p == 1.0 && (converged || iter % config_.refine_interval == 0)) {
      vertex = RefineVertex(a_, bs, v, config_.refine_pivot_budget);
      if (vertex) break;
    }
    if (converged) break;
  }
  if (p == 1.0 && !vertex && !converged) {
    vertex = RefineVertex(a_, bs, v, config_.refine_pivot_budget);
  }

  sol.iterations = iter;
  if (vertex) {
    sol.x = vertex->x / scale;
    sol.dual = vertex->nu;
    sol.status = SolveStatus::kConverged;
  } else {
    sol.x = AffineProject(a_, *gram_, bs, z) / scale;
    // rho u is a subgradient of sum |z_i|^p; rescale to the norm's multiplier.
    const Vector sub = config_.splitting_step * u;
    const Vector nu_power = gram_->Solve(Vector(values * sub));
    const double xs_norm = LpNorm(scale * sol.x, p);
    const double denom = p * std::pow(xs_norm, p - 1.0);
    sol.dual = denom > 0.0 ? Vector(nu_power / denom) : nu_power;
    sol.status = converged ? SolveStatus::kConverged : SolveStatus::kMaxIters;
  }
  sol.objective = LpNorm(sol.x, p);
  sol.primal_residual = (values * sol.x - b).norm();
  return sol;
}

BpSolution SolveBp(const DenseMatrix& a, const Vector& b, double p,
                   const SolverConfig& config) {
  RequireExponent(p);
  RequireShapes(a, b);
  return BpSolver(a, config).Solve(b, p);
}

BpSolution SolveOracle(const DenseMatrix& a, const Vector& b, double p) {
  RequireExponent(p);
  if (a.cols() > kOracleMaxColumns) {
    throw GuardError("enumeration oracle limited to " +
                     std::to_string(kOracleMaxColumns) + " columns, got " +
                     std::to_string(a.cols()));
  }
  RequireShapes(a, b);
  const GramFactor gram = CholeskyGram(a);  // full row rank check

  if (p > 1.0) {
    SolverConfig tight;
    tight.tol_primal /= 10.0;
    tight.tol_dual /= 10.0;
    tight.max_iters *= 4;
    return BpSolver(a, std::make_shared<const GramFactor>(gram), tight).Solve(b, p);
  }

  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  struct Candidate {
    Vector x;
    Vector nu;
    double cost;
  };
  std::vector<Candidate> candidates;
  std::vector<std::size_t> subset(m);
  std::iota(subset.begin(), subset.end(), std::size_t{0});
  std::size_t examined = 0;
  while (true) {
    ++examined;
    try {
      const SquareSolver lu(SelectColumns(a, subset));
      const Vector xs = lu.Solve(b);
      Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
      Vector signs(static_cast<Eigen::Index>(m));
      for (std::size_t k = 0; k < m; ++k) {
        const auto ki = static_cast<Eigen::Index>(k);
        x(static_cast<Eigen::Index>(subset[k])) = xs(ki);
        signs(ki) = xs(ki) < 0.0 ? -1.0 : 1.0;
      }
      candidates.push_back({x, lu.SolveTransposed(signs), xs.cwiseAbs().sum()});
    } catch (const SingularityError&) {
      // not a basis
    }
    // next combination in lexicographic order
    std::size_t k = m;
    while (k > 0 && subset[k - 1] == n - m + (k - 1)) --k;
    if (k == 0) break;
    ++subset[k - 1];
    for (std::size_t j = k; j < m; ++j) subset[j] = subset[j - 1] + 1;
  }
  if (candidates.empty()) {
    throw NumericalFailure("oracle found no invertible column subset");
  }

  const auto best = std::min_element(
      candidates.begin(), candidates.end(),
      [](const Candidate& l, const Candidate& r) { return l.cost < r.cost; });
  const double cost_tol = 1e-9 * (1.0 + best->cost);
  std::vector<const Vector*> minimizers;
  for (const auto& c : candidates) {
    if (c.cost > best->cost + cost_tol) continue;
    const double point_tol = 1e-9 * (1.0 + c.x.cwiseAbs().maxCoeff());
    const bool seen = std::any_of(minimizers.begin(), minimizers.end(),
                                  [&](const Vector* other) {
                                    return (*other - c.x).cwiseAbs().maxCoeff() <= point_tol;
                                  });
    if (!seen) minimizers.push_back(&c.x);
  }

  BpSolution sol;
  sol.p = 1.0;
  sol.rhs = b;
  sol.x = best->x;
  sol.dual = best->nu;
  sol.iterations = examined;
  sol.objective = LpNorm(sol.x, 1.0);
  sol.primal_residual = (a.values() * sol.x - b).norm();
  sol.minimizer_count = minimizers.size();
  sol.status = minimizers.size() > 1 ? SolveStatus::kCertifiedNonuniqueRisk
                                     : SolveStatus::kConverged;
  return sol;
}

std::vector<std::size_t> Support(const Vector& x, double rel_threshold) {
  std::vector<std::size_t> support;
  if (x.size() == 0) return support;
  const double cutoff = rel_threshold * x.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) > cutoff) support.push_back(static_cast<std::size_t>(i));
  }
  return support;
}

CertificateReport CertifyDetailed(const DenseMatrix& a, const BpSolution& sol,
                                  const SolverConfig& config) {
  if (sol.p != 1.0) {
    throw InvalidArgument("the KKT certificate is defined for p = 1 only");
  }
  if (static_cast<std::size_t>(sol.x.size()) != a.cols()) {
    throw DimensionError("solution length does not match matrix columns");
  }
  CertificateReport report;
  const std::vector<std::size_t> support =
      Support(sol.x, config.sparsity_rel_threshold);
  report.support_size = support.size();
  if (support.empty()) {
    if (sol.rhs.size() > 0 && sol.rhs.norm() > 0.0) {
      throw InconsistencyError("empty support for a nonzero right-hand side");
    }
    report.full_column_rank = true;
    report.nu = Vector::Zero(static_cast<Eigen::Index>(a.rows()));
    report.max_off_support = 0.0;
    report.status = SolveStatus::kCertifiedUnique;
    return report;
  }

  const Eigen::MatrixXd a_s = SelectColumns(a, support);
  Vector signs(static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    signs(static_cast<Eigen::Index>(k)) =
        Sign(sol.x(static_cast<Eigen::Index>(support[k])));
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a_s);
  qr.setThreshold(kPivotTolerance);
  report.full_column_rank =
      static_cast<std::size_t>(qr.rank()) == support.size();

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a_s.transpose());
  cod.setThreshold(kPivotTolerance);
  report.nu = cod.solve(signs);
  report.on_support_residual =
      (a_s.transpose() * report.nu - signs).cwiseAbs().maxCoeff();

  const Vector corr = a.values().transpose() * report.nu;
  std::vector<char> on(a.cols(), 0);
  for (std::size_t i : support) on[i] = 1;
  bool near_one = false;
  const double margin = config.certificate_margin;
  for (std::size_t i = 0; i < a.cols(); ++i) {
    if (on[i]) continue;
    const double c = std::abs(corr(static_cast<Eigen::Index>(i)));
    report.max_off_support = std::max(report.max_off_support, c);
    if (std::abs(c - 1.0) <= margin) near_one = true;
  }

  if (report.on_support_residual <= margin &&
      report.max_off_support <= 1.0 - margin && report.full_column_rank) {
    report.status = SolveStatus::kCertifiedUnique;
  } else if (near_one) {
    report.status = SolveStatus::kCertifiedNonuniqueRisk;
  } else {
    report.status = SolveStatus::kNotCertified;
  }
  return report;
}

SolveStatus Certify(const DenseMatrix& a, const BpSolution& sol,
                    const SolverConfig& config) {
  return CertifyDetailed(a, sol, config).status;
}

}  // namespace lpginv

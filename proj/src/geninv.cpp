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

#include "lpginv/geninv.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>

#include "lpginv/error.hpp"
#include "lpginv/linalg.hpp"
#include "lpginv/matrix_io.hpp"
#include "parallel.hpp"

namespace lpginv {
namespace {

std::vector<std::size_t> ColumnSupport(const DenseMatrix& x, double threshold) {
  std::vector<std::size_t> census(x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    census[c] = Support(Vector(x.values().col(static_cast<Eigen::Index>(c))),
                        threshold)
                    .size();
  }
  return census;
}

double GenInverseResidual(const DenseMatrix& a, const DenseMatrix& x) {
  const double scale = a.FrobeniusNorm();
  const double r = (a.values() * x.values() * a.values() - a.values()).norm();
  return scale > 0.0 ? r / scale : r;
}

void RequireWide(const DenseMatrix& a) {
  if (a.rows() == 0 || a.rows() > a.cols()) {
    throw DimensionError("generalized inverses here need 1 <= rows <= cols");
  }
}

GenInverse ColumnwiseInverse(const DenseMatrix& a, double p,
                             InverseMethod method, const SolverConfig& config) {
  RequireWide(a);
  config.Validate();
  const BpSolver solver(a, config);
  const std::size_t m = a.rows();
  std::vector<BpSolution> columns(m);
  internal::ParallelFor(m, [&](std::size_t i) {
    Vector e = Vector::Zero(static_cast<Eigen::Index>(m));
    e(static_cast<Eigen::Index>(i)) = 1.0;
    columns[i] = solver.Solve(e, p);
  });

  RowMajorMatrix x(static_cast<Eigen::Index>(a.cols()), static_cast<Eigen::Index>(m));
  std::vector<SolveStatus> statuses(m);
  for (std::size_t i = 0; i < m; ++i) {
    x.col(static_cast<Eigen::Index>(i)) = columns[i].x;
    statuses[i] = columns[i].status;
    if (p == 1.0 && columns[i].status == SolveStatus::kConverged) {
      statuses[i] = Certify(a, columns[i], config);
    }
  }
  GenInverse g = MakeGenInverse(a, DenseMatrix(std::move(x)), method, p, config);
  g.per_column_status = std::move(statuses);
  return g;
}

}  // namespace

std::size_t GenInverse::TotalSupport() const {
  std::size_t total = 0;
  for (std::size_t s : per_column_support) total += s;
  return total;
}

bool GenInverse::NonuniqueRisk() const {
  return std::any_of(per_column_status.begin(), per_column_status.end(),
                     [](SolveStatus s) {
                       return s == SolveStatus::kCertifiedNonuniqueRisk;
                     });
}

bool GenInverse::AllConverged() const {
  return std::none_of(per_column_status.begin(), per_column_status.end(),
                      [](SolveStatus s) { return s == SolveStatus::kMaxIters; });
}

std::string GenInverse::MethodName() const {
  switch (method) {
    case InverseMethod::kMpp: return "mpp";
    case InverseMethod::kSpinv: return "spinv";
    case InverseMethod::kGinvP: return "ginv_p(" + FormatDouble(p) + ")";
    case InverseMethod::kSubmatrix: return "submatrix";
  }
  return "unknown";
}

GenInverse MakeGenInverse(const DenseMatrix& a, DenseMatrix x,
                          InverseMethod method, double p,
                          const SolverConfig& config) {
  if (x.rows() != a.cols() || x.cols() != a.rows()) {
    throw DimensionError("inverse must be " + std::to_string(a.cols()) + "x" +
                         std::to_string(a.rows()));
  }
  GenInverse g;
  g.method = method;
  g.p = p;
  g.per_column_support = ColumnSupport(x, config.sparsity_rel_threshold);
  g.frobenius_sq = x.FrobeniusNormSquared();
  g.entrywise_l1 = x.EntrywiseL1();
  g.gen_inverse_residual = GenInverseResidual(a, x);
  g.per_column_status.assign(x.cols(), SolveStatus::kConverged);
  g.x = std::move(x);
  return g;
}

GenInverse MppInverse(const DenseMatrix& a, const SolverConfig& config) {
  RequireWide(a);
  return MakeGenInverse(a, Mpp(a), InverseMethod::kMpp, 2.0, config);
}

GenInverse Spinv(const DenseMatrix& a, const SolverConfig& config) {
  return ColumnwiseInverse(a, 1.0, InverseMethod::kSpinv, config);
}

GenInverse GinvP(const DenseMatrix& a, double p, const SolverConfig& config) {
  if (!(p >= 1.0 && p <= 2.0)) {
    throw DomainError("exponent p must lie in [1, 2]");
  }
  return ColumnwiseInverse(a, p, InverseMethod::kGinvP, config);
}

GenInverse SubmatrixInverse(const DenseMatrix& a,
                            const std::vector<std::size_t>& columns,
                            const SolverConfig& config) {
  RequireWide(a);
  if (columns.size() != a.rows()) {
    throw DimensionError("submatrix needs exactly rows() columns");
  }
  const SquareSolver lu(SelectColumns(a, columns));
  const Eigen::MatrixXd inverse = lu.Inverse();
  RowMajorMatrix x = RowMajorMatrix::Zero(static_cast<Eigen::Index>(a.cols()),
                                          static_cast<Eigen::Index>(a.rows()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] >= a.cols()) throw DimensionError("column index out of range");
    x.row(static_cast<Eigen::Index>(columns[k])) =
        inverse.row(static_cast<Eigen::Index>(k));
  }
  return MakeGenInverse(a, DenseMatrix(std::move(x)), InverseMethod::kSubmatrix,
                        0.0, config);
}

GenInverse SubmatrixInverse(const DenseMatrix& a, SeededRng& rng,
                            const SolverConfig& config) {
  RequireWide(a);
  for (int attempt = 0; attempt < kMaxSingularDraws; ++attempt) {
    const std::vector<std::size_t> columns = rng.Subset(a.cols(), a.rows());
    try {
      return SubmatrixInverse(a, columns, config);
    } catch (const SingularityError&) {
      // redraw
    }
  }
  throw NumericalFailure(std::to_string(kMaxSingularDraws) +
                         " consecutive singular submatrix draws");
}

ValidationReport Validate(const DenseMatrix& a, const GenInverse& g,
                          const SolverConfig& config) {
  if (g.x.rows() != a.cols() || g.x.cols() != a.rows()) {
    throw DimensionError("shape mismatch between A and its candidate inverse");
  }
  ValidationReport report;
  report.gen_inverse_residual = GenInverseResidual(a, g.x);
  const auto m = static_cast<Eigen::Index>(a.rows());
  report.right_inverse_residual =
      (a.values() * g.x.values() - Eigen::MatrixXd::Identity(m, m)).norm();
  report.frobenius_sq = g.x.FrobeniusNormSquared();
  report.entrywise_l1 = g.x.EntrywiseL1();
  report.support_census = ColumnSupport(g.x, config.sparsity_rel_threshold);

  auto add = [&](std::string name, double value, double threshold) {
    report.checks.push_back({std::move(name), value, threshold, value <= threshold});
  };
  add("AXA=A", report.gen_inverse_residual, kGenInverseTolerance);
  add("AX=I", report.right_inverse_residual, kGenInverseTolerance);
  auto relative = [](double stored, double fresh) {
    return std::abs(stored - fresh) / std::max(std::abs(fresh), 1e-300);
  };
  add("frobenius_sq", relative(g.frobenius_sq, report.frobenius_sq), 1e-10);
  add("entrywise_l1", relative(g.entrywise_l1, report.entrywise_l1), 1e-10);
  add("support_census",
      report.support_census == g.per_column_support ? 0.0 : 1.0, 0.0);
  report.all_passed = std::all_of(report.checks.begin(), report.checks.end(),
                                  [](const ValidationCheck& c) { return c.passed; });
  return report;
}

nlohmann::json ToJson(const GenInverse& g) {
  nlohmann::json j;
  j["method"] = g.MethodName();
  j["p"] = g.p;
  j["rows"] = g.x.rows();
  j["cols"] = g.x.cols();
  j["X"] = std::vector<double>(g.x.data().begin(), g.x.data().end());
  j["per_column_support"] = g.per_column_support;
  j["total_support"] = g.TotalSupport();
  j["frobenius_sq"] = g.frobenius_sq;
  j["entrywise_l1"] = g.entrywise_l1;
  j["gen_inverse_residual"] = g.gen_inverse_residual;
  std::vector<std::string> statuses;
  for (SolveStatus s : g.per_column_status) statuses.emplace_back(ToString(s));
  j["per_column_status"] = statuses;
  j["nonunique_risk"] = g.NonuniqueRisk();
  return j;
}

nlohmann::json ToJson(const ValidationReport& report) {
  nlohmann::json j;
  j["all_passed"] = report.all_passed;
  j["gen_inverse_residual"] = report.gen_inverse_residual;
  j["right_inverse_residual"] = report.right_inverse_residual;
  j["frobenius_sq"] = report.frobenius_sq;
  j["entrywise_l1"] = report.entrywise_l1;
  j["support_census"] = report.support_census;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"passed", c.passed}});
  }
  j["checks"] = checks;
  return j;
}

}  // namespace lpginv

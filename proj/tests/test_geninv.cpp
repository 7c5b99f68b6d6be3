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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <doctest.h>

#include "lpginv/error.hpp"
#include "lpginv/geninv.hpp"
#include "lpginv/rng.hpp"

using namespace lpginv;

namespace {

// Column-wise l1 reference by exhaustive basis enumeration.
double BruteForceL1(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const auto m = a.rows();
  const auto n = a.cols();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> mask(static_cast<std::size_t>(n), 0);
  std::fill(mask.begin(), mask.begin() + m, 1);
  std::sort(mask.begin(), mask.end());
  do {
    Eigen::MatrixXd sub(m, m);
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (mask[static_cast<std::size_t>(j)]) sub.col(k++) = a.col(j);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (lu.rank() < m) continue;
    best = std::min(best, lu.solve(b).cwiseAbs().sum());
  } while (std::next_permutation(mask.begin(), mask.end()));
  return best;
}

double MaxAbsDiff(const DenseMatrix& x, const DenseMatrix& y) {
  return (x.values() - y.values()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("spinv examples") {
  const GenInverse eye = Spinv(DenseMatrix::Identity(3));
  CHECK(MaxAbsDiff(eye.x, DenseMatrix::Identity(3)) <= 1e-9);
  CHECK(eye.per_column_support == std::vector<std::size_t>{1, 1, 1});

  const GenInverse g = Spinv(DenseMatrix(2, 3, {1, 0, 1, 0, 1, 1}));
  CHECK(MaxAbsDiff(g.x, DenseMatrix(3, 2, {1, 0, 0, 1, 0, 0})) <= 1e-9);
  CHECK(g.MethodName() == "spinv");
}

TEST_CASE("spinv of a 10x30 Gaussian has 100 nonzeros") {
  SeededRng rng(1);
  const DenseMatrix a = GaussianMatrix(rng, 10, 30);
  const GenInverse g = Spinv(a);
  CHECK(g.TotalSupport() == 100);
  CHECK_FALSE(g.NonuniqueRisk());
  for (SolveStatus s : g.per_column_status) CHECK(s == SolveStatus::kCertifiedUnique);
}

TEST_CASE("spinv columns match exhaustive enumeration") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SeededRng rng(seed);
    const DenseMatrix a = GaussianMatrix(rng, 4, 9);
    const GenInverse g = Spinv(a);
    for (Eigen::Index i = 0; i < 4; ++i) {
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(4, i);
      CHECK(g.x.values().col(i).cwiseAbs().sum() ==
            doctest::Approx(BruteForceL1(a.values(), e)).epsilon(1e-8));
    }
  }
}

TEST_CASE("ginv_p examples and consistency") {
  SeededRng rng(12);
  const DenseMatrix a = GaussianMatrix(rng, 6, 14);
  CHECK(MaxAbsDiff(GinvP(a, 2.0).x, MppInverse(a).x) <= 1e-6);
  CHECK(MaxAbsDiff(GinvP(a, 1.0).x, Spinv(a).x) <= 1e-6);

  const GenInverse row = GinvP(DenseMatrix(1, 2, {2, 1}), 1.0);
  CHECK(row.x(0, 0) == doctest::Approx(0.5));
  CHECK(std::abs(row.x(1, 0)) <= 1e-9);

  const GenInverse eye = GinvP(DenseMatrix::Identity(3), 1.5);
  CHECK(MaxAbsDiff(eye.x, DenseMatrix::Identity(3)) <= 1e-8);
  CHECK(eye.MethodName() == "ginv_p(1.5)");

  CHECK_THROWS_AS(GinvP(a, 3.0), DomainError);
  CHECK_THROWS_AS(Spinv(DenseMatrix(3, 2, {1, 0, 0, 1, 1, 1})), DimensionError);
}

TEST_CASE("ginv_p norm interpolates between the endpoints") {
  // The l^p minimizer beats the other methods in its own norm.
  SeededRng rng(40);
  const DenseMatrix a = GaussianMatrix(rng, 5, 12);
  const double p = 1.5;
  auto lp = [p](const DenseMatrix& x) { return x.values().array().abs().pow(p).sum(); };
  const GenInverse gp = GinvP(a, p);
  CHECK(lp(gp.x) <= lp(MppInverse(a).x) + 1e-8);
  CHECK(lp(gp.x) <= lp(Spinv(a).x) + 1e-8);
  CHECK(gp.gen_inverse_residual <= 1e-6);
}

TEST_CASE("submatrix inverse") {
  const DenseMatrix a(2, 3, {1, 0, 5, 0, 1, 7});
  const GenInverse g = SubmatrixInverse(a, std::vector<std::size_t>{0, 1});
  CHECK(MaxAbsDiff(g.x, DenseMatrix(3, 2, {1, 0, 0, 1, 0, 0})) <= 1e-12);
  CHECK(g.MethodName() == "submatrix");

  SeededRng rng(77);
  const DenseMatrix b = GaussianMatrix(rng, 8, 20);
  for (int k = 0; k < 20; ++k) {
    const GenInverse s = SubmatrixInverse(b, rng);
    CHECK(s.gen_inverse_residual <= 1e-6);
    for (std::size_t c : s.per_column_support) CHECK(c <= 8);
  }

  const DenseMatrix dup(2, 3, {1, 2, 3, 2, 4, 6});
  CHECK_THROWS_AS(SubmatrixInverse(dup, std::vector<std::size_t>{0, 1}), SingularityError);
}

TEST_CASE("submatrix inverse gives up on an all-singular matrix") {
  // Rank one: every 2-column subset is singular.
  const DenseMatrix a(2, 3, {1, 2, 3, 1, 2, 3});
  SeededRng rng(5);
  CHECK_THROWS_AS(SubmatrixInverse(a, rng), NumericalFailure);
}

TEST_CASE("validate") {
  SeededRng rng(3);
  const DenseMatrix a = GaussianMatrix(rng, 6, 15);
  const ValidationReport ok = Validate(a, MppInverse(a));
  CHECK(ok.all_passed);

  const GenInverse zero = MakeGenInverse(a, DenseMatrix::Zeros(15, 6), InverseMethod::kMpp, 2.0);
  const ValidationReport bad = Validate(a, zero);
  CHECK_FALSE(bad.all_passed);
  const auto axa = std::find_if(bad.checks.begin(), bad.checks.end(),
                                [](const ValidationCheck& c) { return c.name == "AXA=A"; });
  REQUIRE(axa != bad.checks.end());
  CHECK_FALSE(axa->passed);

  SeededRng rng2(21);
  const DenseMatrix b = GaussianMatrix(rng2, 20, 30);
  const ValidationReport sp = Validate(b, Spinv(b));
  CHECK(sp.all_passed);
  for (std::size_t c : sp.support_census) CHECK(c == 20);

  CHECK_THROWS_AS(Validate(b, MppInverse(a)), DimensionError);
}

TEST_CASE("optimality orderings and exact sparsity over many seeds") {
  for (std::size_t m : {10, 20}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      CAPTURE(m);
      CAPTURE(seed);
      SeededRng rng(MixSeed(seed, m));
      const DenseMatrix a = GaussianMatrix(rng, m, 30);
      const GenInverse sp = Spinv(a);
      const GenInverse mpp = MppInverse(a);
      const GenInverse sub = SubmatrixInverse(a, rng);
      for (std::size_t c : sp.per_column_support) CHECK(c == m);
      CHECK(sp.entrywise_l1 <= mpp.entrywise_l1 + 1e-6);
      CHECK(sp.entrywise_l1 <= sub.entrywise_l1 + 1e-6);
      CHECK(mpp.frobenius_sq <= sp.frobenius_sq + 1e-9);
      CHECK(sp.gen_inverse_residual <= 1e-6);
      CHECK(mpp.gen_inverse_residual <= 1e-6);
      CHECK(sp.frobenius_sq == doctest::Approx(sp.x.values().squaredNorm()).epsilon(1e-10));
    }
  }
}

TEST_CASE("ties are flagged, not hidden") {
  const GenInverse g = Spinv(DenseMatrix(1, 2, {1, 1}));
  CHECK(g.NonuniqueRisk());
  CHECK(g.x.values().col(0).cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("json export carries the diagnostics") {
  const GenInverse g = Spinv(DenseMatrix::Identity(2));
  const nlohmann::json j = ToJson(g);
  CHECK(j.at("method") == "spinv");
  CHECK(j.at("total_support") == 2);
  CHECK(j.at("X").size() == 4);
  CHECK(j.at("per_column_status")[0] == "certified_unique");
  const nlohmann::json r = ToJson(Validate(DenseMatrix::Identity(2), g));
  CHECK(r.at("all_passed") == true);
}

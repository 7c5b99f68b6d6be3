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

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <doctest.h>

#include "lpginv/dense_matrix.hpp"
#include "lpginv/error.hpp"
#include "lpginv/linalg.hpp"
#include "lpginv/matrix_io.hpp"
#include "lpginv/rng.hpp"

using namespace lpginv;

namespace {

// Reference pseudoinverse from an SVD, independent of the Cholesky path.
Eigen::MatrixXd SvdPinv(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd inv = svd.singularValues();
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = 1.0 / inv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

TEST_CASE("dense matrix rejects bad data") {
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(DenseMatrix(1, 2, {1, std::numeric_limits<double>::quiet_NaN()}),
                  DomainError);
  CHECK_THROWS_AS(DenseMatrix(1, 1, {std::numeric_limits<double>::infinity()}),
                  DomainError);
  const DenseMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(m(1, 0) == 4);
  CHECK(m.Transposed()(0, 1) == 4);
  CHECK(m.EntrywiseL1() == doctest::Approx(21));
  CHECK(m.FrobeniusNormSquared() == doctest::Approx(91));
}

TEST_CASE("gaussian matrix is reproducible and standard") {
  SeededRng r1(42), r2(42);
  CHECK(GaussianMatrix(r1, 10, 30) == GaussianMatrix(r2, 10, 30));

  SeededRng r3(42);
  const DenseMatrix tall = GaussianMatrix(r3, 1000, 1);
  const auto& v = tall.values();
  const double mean = v.mean();
  const double var = (v.array() - mean).square().sum() / 999.0;
  CHECK(mean >= -0.1);
  CHECK(mean <= 0.1);
  CHECK(var >= 0.9);
  CHECK(var <= 1.1);

  SeededRng r4(1);
  CHECK_THROWS_AS(GaussianMatrix(r4, 0, 5), DimensionError);
}

TEST_CASE("split streams differ from the parent and from each other") {
  SeededRng parent(7);
  SeededRng a = parent.Split(0);
  SeededRng b = parent.Split(1);
  CHECK(a.NextU64() != b.NextU64());
  CHECK(MixSeed(7, 0) != MixSeed(7, 1));
  CHECK(MixSeed(7, 3) == MixSeed(7, 3));
  SeededRng s(9);
  const auto subset = s.Subset(30, 10);
  CHECK(subset.size() == 10);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    CHECK(subset[i] < 30);
    for (std::size_t j = i + 1; j < subset.size(); ++j) CHECK(subset[i] != subset[j]);
  }
}

TEST_CASE("cholesky gram examples") {
  const GramFactor eye = CholeskyGram(DenseMatrix::Identity(2));
  CHECK(eye.lower().isApprox(Eigen::MatrixXd::Identity(2, 2)));

  const GramFactor one = CholeskyGram(DenseMatrix(1, 2, {3, 4}));
  CHECK(one.lower()(0, 0) == doctest::Approx(5.0));

  try {
    CholeskyGram(DenseMatrix(2, 2, {1, 1, 1, 1}));
    FAIL("expected a singularity error");
  } catch (const SingularityError& e) {
    CHECK(e.pivot_index() == 1);
  }
  CHECK_THROWS_AS(CholeskyGram(DenseMatrix(3, 2, {1, 0, 0, 1, 1, 1})), DimensionError);
}

TEST_CASE("cholesky reconstruction on random inputs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SeededRng rng(seed);
    const DenseMatrix a = GaussianMatrix(rng, 15, 40);
    const GramFactor f = CholeskyGram(a);
    const Eigen::MatrixXd gram = a.values() * a.values().transpose();
    const Eigen::MatrixXd recon = f.lower() * f.lower().transpose();
    CHECK((recon - gram).norm() <= 1e-10 * gram.norm());
    for (Eigen::Index i = 0; i < f.lower().rows(); ++i) CHECK(f.lower()(i, i) > 0.0);
  }
}

TEST_CASE("mpp examples") {
  CHECK(Mpp(DenseMatrix(1, 1, {2})).values()(0, 0) == doctest::Approx(0.5));
  const DenseMatrix row = Mpp(DenseMatrix(1, 2, {1, 1}));
  CHECK(row.rows() == 2);
  CHECK(row(0, 0) == doctest::Approx(0.5));
  CHECK(row(1, 0) == doctest::Approx(0.5));
  CHECK(Mpp(DenseMatrix::Identity(3)).values().isApprox(Eigen::MatrixXd::Identity(3, 3)));
  CHECK_THROWS_AS(Mpp(DenseMatrix(2, 3, {1, 2, 3, 2, 4, 6})), SingularityError);
}

TEST_CASE("mpp satisfies the four Penrose conditions and matches an SVD") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SeededRng rng(seed);
    const DenseMatrix a = GaussianMatrix(rng, 12, 30);
    const Eigen::MatrixXd A = a.values();
    const Eigen::MatrixXd X = Mpp(a).values();
    const double scale = A.norm();
    CHECK((A * X * A - A).norm() <= 1e-8 * scale);
    CHECK((X * A * X - X).norm() <= 1e-8 * X.norm());
    CHECK(((A * X).transpose() - A * X).norm() <= 1e-8);
    CHECK(((X * A).transpose() - X * A).norm() <= 1e-8);
    CHECK((A * X - Eigen::MatrixXd::Identity(12, 12)).norm() <= 1e-8);
    CHECK((X - SvdPinv(A)).norm() <= 1e-8 * X.norm());
  }
}

TEST_CASE("affine projection") {
  const DenseMatrix e1(1, 2, {1, 0});
  const GramFactor f1 = CholeskyGram(e1);
  Vector b(1);
  b << 1;
  const Vector x = AffineProject(e1, f1, b, Vector::Zero(2));
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x(1) == doctest::Approx(0.0));

  const DenseMatrix ones(1, 2, {1, 1});
  const Vector y = AffineProject(ones, CholeskyGram(ones), b, Vector::Zero(2));
  CHECK(y(0) == doctest::Approx(0.5));
  CHECK(y(1) == doctest::Approx(0.5));

  SeededRng rng(3);
  const DenseMatrix a = GaussianMatrix(rng, 8, 20);
  const GramFactor f = CholeskyGram(a);
  Vector rhs(8), z(20);
  for (int i = 0; i < 8; ++i) rhs(i) = rng.Normal();
  for (int i = 0; i < 20; ++i) z(i) = rng.Normal();
  const Vector once = AffineProject(a, f, rhs, z);
  const Vector twice = AffineProject(a, f, rhs, once);
  CHECK((a.values() * once - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
  CHECK((twice - once).norm() <= 1e-12 * (1.0 + once.norm()));
  CHECK_THROWS_AS(AffineProject(a, f, Vector::Zero(3), z), DimensionError);
}

TEST_CASE("square solver reports singular submatrices") {
  Eigen::MatrixXd s(2, 2);
  s << 1, 2, 2, 4;
  CHECK_THROWS_AS(SquareSolver{s}, SingularityError);
  s << 2, 0, 0, 4;
  const SquareSolver solver(s);
  CHECK(solver.Inverse()(1, 1) == doctest::Approx(0.25));
}

TEST_CASE("csv round trip is exact") {
  SeededRng rng(11);
  const DenseMatrix a = GaussianMatrix(rng, 4, 7);
  std::stringstream buffer;
  WriteMatrixCsv(buffer, a);
  CHECK(buffer.str().rfind("# rows=4 cols=7", 0) == 0);
  CHECK(ReadMatrixCsv(buffer) == a);
  CHECK(ParseDouble(FormatDouble(0.1)) == 0.1);
}

TEST_CASE("csv parse errors") {
  std::stringstream no_header("1,2\n3,4\n");
  CHECK_THROWS_AS(ReadMatrixCsv(no_header), ParseError);
  std::stringstream short_row("# rows=2 cols=2\n1,2\n3\n");
  CHECK_THROWS_AS(ReadMatrixCsv(short_row), ParseError);
  std::stringstream missing_row("# rows=2 cols=2\n1,2\n");
  CHECK_THROWS_AS(ReadMatrixCsv(missing_row), ParseError);
  std::stringstream junk("# rows=1 cols=2\n1,abc\n");
  CHECK_THROWS_AS(ReadMatrixCsv(junk), ParseError);
  CHECK_THROWS_AS(LoadMatrixCsv("/nonexistent/dir/A.csv"), IoError);
}

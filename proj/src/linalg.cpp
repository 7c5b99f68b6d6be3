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

#include "lpginv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lpginv/error.hpp"

namespace lpginv {

Vector GramFactor::Solve(const Vector& rhs) const {
  Vector y = lower_.triangularView<Eigen::Lower>().solve(rhs);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::MatrixXd GramFactor::Solve(const Eigen::MatrixXd& rhs) const {
  Eigen::MatrixXd y = lower_.triangularView<Eigen::Lower>().solve(rhs);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

GramFactor CholeskyGram(const DenseMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw DimensionError("Gram factor of an empty matrix");
  }
  if (a.rows() > a.cols()) {
    throw DimensionError("Gram factor requires rows <= cols, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  const Eigen::MatrixXd gram = a.values() * a.values().transpose();
  const Eigen::Index m = gram.rows();
  const double largest = gram.diagonal().maxCoeff();
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double pivot = gram(j, j) - lower.row(j).head(j).squaredNorm();
    if (!(pivot > kPivotTolerance * largest)) {
      throw SingularityError(
          "A A^T is numerically singular at pivot " + std::to_string(j),
          static_cast<std::size_t>(j));
    }
    const double ljj = std::sqrt(pivot);
    lower(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < m; ++i) {
      lower(i, j) =
          (gram(i, j) - lower.row(i).head(j).dot(lower.row(j).head(j))) / ljj;
    }
  }
  return GramFactor(std::move(lower));
}

DenseMatrix Mpp(const DenseMatrix& a) { return Mpp(a, CholeskyGram(a)); }

DenseMatrix Mpp(const DenseMatrix& a, const GramFactor& gram) {
  // X^T = (A A^T)^{-1} A
  Eigen::MatrixXd xt = gram.Solve(Eigen::MatrixXd(a.values()));
  return DenseMatrix(RowMajorMatrix(xt.transpose()));
}

Vector AffineProject(const DenseMatrix& a, const GramFactor& gram,
                     const Vector& b, const Vector& z) {
  if (static_cast<std::size_t>(b.size()) != a.rows() ||
      static_cast<std::size_t>(z.size()) != a.cols() ||
      gram.size() != a.rows()) {
    throw DimensionError("affine projection dimension mismatch");
  }
  const Vector residual = a.values() * z - b;
  return z - a.values().transpose() * gram.Solve(residual);
}

SquareSolver::SquareSolver(const Eigen::MatrixXd& square) {
  if (square.rows() != square.cols() || square.rows() == 0) {
    throw DimensionError("SquareSolver needs a non-empty square matrix");
  }
  lu_.compute(square);
  const auto& packed = lu_.matrixLU();
  const double largest = packed.diagonal().cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < packed.rows(); ++k) {
    if (!(std::abs(packed(k, k)) > kPivotTolerance * largest)) {
      throw SingularityError(
          "square matrix is numerically singular at pivot " + std::to_string(k),
          static_cast<std::size_t>(k));
    }
  }
}

Eigen::MatrixXd SelectColumns(const DenseMatrix& a,
                              std::span<const std::size_t> columns) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(a.rows()),
                      static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) =
        a.values().col(static_cast<Eigen::Index>(columns[k]));
  }
  return out;
}

Vector ToVector(std::span<const double> values) {
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

std::vector<double> ToStdVector(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace lpginv

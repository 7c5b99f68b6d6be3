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

#ifndef LPGINV_LINALG_HPP
#define LPGINV_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "lpginv/dense_matrix.hpp"

namespace lpginv {

// Relative pivot tolerance used for every rank decision in the library.
inline constexpr double kPivotTolerance = 1e-12;

// Cholesky factor L of the Gram matrix A A^T of a full-row-rank matrix.
class GramFactor {
 public:
  std::size_t size() const { return static_cast<std::size_t>(lower_.rows()); }
  const Eigen::MatrixXd& lower() const { return lower_; }

  // Solves (A A^T) y = r.
  Vector Solve(const Vector& rhs) const;
  // Column-wise solve for a block of right-hand sides.
  Eigen::MatrixXd Solve(const Eigen::MatrixXd& rhs) const;

 private:
  friend GramFactor CholeskyGram(const DenseMatrix& a);
  explicit GramFactor(Eigen::MatrixXd lower) : lower_(std::move(lower)) {}
  Eigen::MatrixXd lower_;
};

// Throws SingularityError (carrying the failing pivot index) when a pivot of
// A A^T drops below kPivotTolerance times the largest diagonal entry.
GramFactor CholeskyGram(const DenseMatrix& a);

// Moore-Penrose pseudoinverse A^T (A A^T)^{-1} of a wide full-row-rank A.
DenseMatrix Mpp(const DenseMatrix& a);
DenseMatrix Mpp(const DenseMatrix& a, const GramFactor& gram);

// Orthogonal projection of z onto {x : A x = b}.
Vector AffineProject(const DenseMatrix& a, const GramFactor& gram,
                     const Vector& b, const Vector& z);

// LU factorization of a square matrix with the library's pivot tolerance.
class SquareSolver {
 public:
  explicit SquareSolver(const Eigen::MatrixXd& square);

  Vector Solve(const Vector& rhs) const { return lu_.solve(rhs); }
  Vector SolveTransposed(const Vector& rhs) const {
    return lu_.transpose().solve(rhs);
  }
  Eigen::MatrixXd Inverse() const { return lu_.inverse(); }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

// Columns of A selected by `columns`, in that order.
Eigen::MatrixXd SelectColumns(const DenseMatrix& a,
                              std::span<const std::size_t> columns);

Vector ToVector(std::span<const double> values);
std::vector<double> ToStdVector(const Vector& v);

}  // namespace lpginv

#endif  // LPGINV_LINALG_HPP

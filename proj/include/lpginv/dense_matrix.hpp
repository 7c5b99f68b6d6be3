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

#ifndef LPGINV_DENSE_MATRIX_HPP
#define LPGINV_DENSE_MATRIX_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace lpginv {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Immutable rectangular real matrix stored row-major. Every entry is finite;
// the constructors reject NaN and Inf.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  explicit DenseMatrix(RowMajorMatrix values);

  static DenseMatrix Zeros(std::size_t rows, std::size_t cols);
  static DenseMatrix Identity(std::size_t size);

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
  double operator()(std::size_t r, std::size_t c) const {
    return values_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  std::span<const double> data() const {
    return {values_.data(), static_cast<std::size_t>(values_.size())};
  }
  const RowMajorMatrix& values() const { return values_; }

  DenseMatrix Transposed() const;
  double FrobeniusNorm() const { return values_.norm(); }
  double FrobeniusNormSquared() const { return values_.squaredNorm(); }
  double EntrywiseL1() const { return values_.cwiseAbs().sum(); }

  bool operator==(const DenseMatrix& other) const;

 private:
  RowMajorMatrix values_;
};

}  // namespace lpginv

#endif  // LPGINV_DENSE_MATRIX_HPP

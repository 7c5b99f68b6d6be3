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

#include "lpginv/dense_matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "lpginv/error.hpp"

namespace lpginv {
namespace {

void RequireFinite(const RowMajorMatrix& values) {
  if (!values.allFinite()) {
    throw DomainError("matrix contains non-finite entries");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data) {
  if (data.size() != rows * cols) {
    throw DimensionError("data length " + std::to_string(data.size()) +
                         " does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  values_ = Eigen::Map<const RowMajorMatrix>(
      data.data(), static_cast<Eigen::Index>(rows),
      static_cast<Eigen::Index>(cols));
  RequireFinite(values_);
}

DenseMatrix::DenseMatrix(RowMajorMatrix values) : values_(std::move(values)) {
  RequireFinite(values_);
}

DenseMatrix DenseMatrix::Zeros(std::size_t rows, std::size_t cols) {
  return DenseMatrix(RowMajorMatrix::Zero(static_cast<Eigen::Index>(rows),
                                          static_cast<Eigen::Index>(cols)));
}

DenseMatrix DenseMatrix::Identity(std::size_t size) {
  const auto n = static_cast<Eigen::Index>(size);
  return DenseMatrix(RowMajorMatrix::Identity(n, n));
}

DenseMatrix DenseMatrix::Transposed() const {
  return DenseMatrix(RowMajorMatrix(values_.transpose()));
}

bool DenseMatrix::operator==(const DenseMatrix& other) const {
  return values_.rows() == other.values_.rows() &&
         values_.cols() == other.values_.cols() && values_ == other.values_;
}

}  // namespace lpginv

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

#ifndef LPGINV_ERROR_HPP
#define LPGINV_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpginv {

// Error categories shared by the C++ core and the C API status codes.
enum class ErrorKind {
  kDimension,
  kSingular,
  kDomain,
  kGuard,
  kInconsistent,
  kNumerical,
  kIo,
  kParse,
  kInvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorKind::kDimension, what) {}
};

// Raised when a Gram matrix or square submatrix is numerically singular.
// pivot_index is the first pivot that fell below the relative tolerance.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, std::size_t pivot_index)
      : Error(ErrorKind::kSingular, what), pivot_index_(pivot_index) {}
  std::size_t pivot_index() const noexcept { return pivot_index_; }

 private:
  std::size_t pivot_index_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::kDomain, what) {}
};

class GuardError : public Error {
 public:
  explicit GuardError(const std::string& what)
      : Error(ErrorKind::kGuard, what) {}
};

class InconsistencyError : public Error {
 public:
  explicit InconsistencyError(const std::string& what)
      : Error(ErrorKind::kInconsistent, what) {}
};

class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what)
      : Error(ErrorKind::kNumerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what)
      : Error(ErrorKind::kParse, what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::kInvalidArgument, what) {}
};

}  // namespace lpginv

#endif  // LPGINV_ERROR_HPP

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

#ifndef LPGINV_MATRIX_IO_HPP
#define LPGINV_MATRIX_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "lpginv/dense_matrix.hpp"

namespace lpginv {

// Matrix CSV format:
//
//   # rows=<m> cols=<n>
//   a00,a01,...
//   ...
//
// One matrix row per line, '.' as decimal point regardless of locale.
// Values are written in shortest round-trip form, so write/read is exact.
void WriteMatrixCsv(std::ostream& out, const DenseMatrix& matrix);
DenseMatrix ReadMatrixCsv(std::istream& in);

void SaveMatrixCsv(const std::filesystem::path& path, const DenseMatrix& matrix);
DenseMatrix LoadMatrixCsv(const std::filesystem::path& path);

// Shortest round-trip decimal text for a double.
std::string FormatDouble(double value);
double ParseDouble(std::string_view text);

// Writes `contents` to `path`, creating parent directories.
void WriteTextFile(const std::filesystem::path& path, std::string_view contents);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace lpginv

#endif  // LPGINV_MATRIX_IO_HPP

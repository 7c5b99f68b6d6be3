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

#include "lpginv/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "lpginv/error.hpp"

namespace lpginv {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t ParseHeaderField(std::string_view header, std::string_view key) {
  const auto pos = header.find(key);
  if (pos == std::string_view::npos) {
    throw ParseError("matrix header missing '" + std::string(key) + "'");
  }
  std::string_view rest = header.substr(pos + key.size());
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (ec != std::errc() || ptr == rest.data()) {
    throw ParseError("bad value for '" + std::string(key) + "' in matrix header");
  }
  return value;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw InvalidArgument("cannot format double");
  return std::string(buf, ptr);
}

double ParseDouble(std::string_view text) {
  text = Trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

void WriteMatrixCsv(std::ostream& out, const DenseMatrix& matrix) {
  out << "# rows=" << matrix.rows() << " cols=" << matrix.cols() << '\n';
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      if (c) out << ',';
      out << FormatDouble(matrix(r, c));
    }
    out << '\n';
  }
}

DenseMatrix ReadMatrixCsv(std::istream& in) {
  std::string line;
  std::string header;
  while (std::getline(in, line)) {
    if (!Trim(line).empty()) {
      header = line;
      break;
    }
  }
  if (Trim(header).rfind('#', 0) != 0) {
    throw ParseError("matrix file must start with '# rows=<m> cols=<n>'");
  }
  const std::size_t rows = ParseHeaderField(header, "rows=");
  const std::size_t cols = ParseHeaderField(header, "cols=");

  std::vector<double> data;
  data.reserve(rows * cols);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    std::string_view view = Trim(line);
    if (view.empty()) continue;
    if (row == rows) throw ParseError("more data rows than declared");
    std::size_t count = 0;
    while (true) {
      const auto comma = view.find(',');
      data.push_back(ParseDouble(view.substr(0, comma)));
      ++count;
      if (comma == std::string_view::npos) break;
      view.remove_prefix(comma + 1);
    }
    if (count != cols) {
      throw ParseError("row " + std::to_string(row) + " has " +
                       std::to_string(count) + " values, expected " +
                       std::to_string(cols));
    }
    ++row;
  }
  if (row != rows) {
    throw ParseError("expected " + std::to_string(rows) + " rows, found " +
                     std::to_string(row));
  }
  return DenseMatrix(rows, cols, std::move(data));
}

void SaveMatrixCsv(const std::filesystem::path& path, const DenseMatrix& matrix) {
  std::ostringstream out;
  WriteMatrixCsv(out, matrix);
  WriteTextFile(path, out.str());
}

DenseMatrix LoadMatrixCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return ReadMatrixCsv(in);
}

void WriteTextFile(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lpginv

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

#ifndef LPGINV_ACCEPTANCE_HPP
#define LPGINV_ACCEPTANCE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace lpginv {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20260101;
  // Called after each criterion finishes, e.g. to stream progress.
  std::function<void(const CriterionResult&)> on_result;
};

// Runs the eleven acceptance criteria in order. Criteria 4, 5 and 10 reuse
// the instances built by criteria 1 to 3.
std::vector<CriterionResult> RunAcceptance(const AcceptanceOptions& options = {});

std::string FormatResultLine(const CriterionResult& result);
nlohmann::json ToJson(const std::vector<CriterionResult>& results);

}  // namespace lpginv

#endif  // LPGINV_ACCEPTANCE_HPP

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

#ifndef LPGINV_EXPERIMENTS_HPP
#define LPGINV_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpginv/bp_solver.hpp"
#include "lpginv/geninv.hpp"
#include "lpginv/theory.hpp"

namespace lpginv {

enum class ExperimentName {
  kFig1Sparsity,
  kFig2Boxplot,
  kFig3Means,
  kFig4Realizations,
  kConcentration,
};

std::string ToString(ExperimentName name);
// Accepts the full names and the short aliases fig1 .. fig4.
ExperimentName ParseExperimentName(const std::string& text);

struct ExperimentSpec {
  ExperimentName name = ExperimentName::kConcentration;
  std::vector<std::size_t> n_values;
  std::vector<double> delta_values;
  double p = 1.0;
  std::size_t trials = 10;
  std::uint64_t base_seed = 1;
  std::filesystem::path output_dir;  // empty: keep results in memory only
  // Matrix height for fig1/fig2 (n comes from n_values.front()).
  std::optional<std::size_t> m;
  std::size_t repetitions = 5;  // fig2 experiments
  std::size_t draws = 100;      // fig2 submatrix draws per experiment
  // Finite-n theory overlay; forced on for 1 < p < 2.
  bool finite_n_theory = false;
  std::size_t mc_samples = 20000;
  SolverConfig solver;

  // Defaults for a named experiment at desk scale.
  static ExperimentSpec Defaults(ExperimentName name);
  void Validate() const;
};

ExperimentSpec SpecFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const ExperimentSpec& spec);

// m = round(delta n) + 1 so that (m - 1) / n is delta up to rounding.
std::size_t RowsForDelta(double delta, std::size_t n);

struct TrialRecord {
  std::uint64_t seed = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  double p = 1.0;
  std::string method;
  double frobenius_sq_scaled = 0.0;  // (n/m) ||X||_F^2
  double entrywise_l1 = 0.0;
  std::size_t total_support = 0;
  bool excluded = false;  // non-uniqueness risk or non-convergence
  double wall_time_ms = 0.0;
};

inline constexpr const char* kTrialCsvHeader =
    "seed,m,n,p,method,frobenius_sq_scaled,entrywise_l1,total_support,excluded,"
    "wall_time_ms";
std::string ToCsvRow(const TrialRecord& record);

struct Fig1Result {
  DenseMatrix a;
  GenInverse mpp;
  GenInverse spinv;
};

struct Fig2Experiment {
  std::uint64_t seed = 0;
  double spinv_frobenius = 0.0;
  double mpp_frobenius = 0.0;
  std::vector<double> submatrix_frobenius;
};

struct Fig2Result {
  std::vector<Fig2Experiment> experiments;
};

struct CellSummary {
  std::size_t n = 0;
  std::size_t m = 0;
  double delta = 0.0;        // requested
  double delta_exact = 0.0;  // (m - 1) / n
  std::size_t trials = 0;
  std::size_t included = 0;
  std::size_t excluded = 0;
  std::optional<double> mean;
  std::optional<double> sd;
  std::optional<TheoryResult> theory;
  std::optional<double> relative_deviation;  // (mean - alpha*^2) / alpha*^2
};

struct ConcentrationResult {
  std::vector<TrialRecord> records;
  std::vector<CellSummary> cells;
};

Fig1Result RunFig1(const ExperimentSpec& spec);
Fig2Result RunFig2(const ExperimentSpec& spec);
ConcentrationResult RunConcentration(const ExperimentSpec& spec);

// Dispatches on spec.name and returns a JSON summary of what was produced.
nlohmann::json RunExperiment(const ExperimentSpec& spec);

// Order statistics used by the fig2 summary.
double Quantile(std::vector<double> values, double q);
double Mean(const std::vector<double>& values);
double SampleSd(const std::vector<double>& values);

}  // namespace lpginv

#endif  // LPGINV_EXPERIMENTS_HPP

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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>
#include <doctest.h>

#include "lpginv/error.hpp"
#include "lpginv/experiments.hpp"
#include "lpginv/matrix_io.hpp"
#include "lpginv/rng.hpp"

using namespace lpginv;
namespace fs = std::filesystem;

namespace {

Eigen::MatrixXd SvdPinv(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd inv = svd.singularValues();
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = 1.0 / inv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

// Linear interpolation between order statistics at (N - 1) q.
double QuantileOracle(std::vector<double> x, double q) {
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Fresh scratch directory, removed on destruction.
struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& tag)
      : path(fs::temp_directory_path() /
             ("lpginv_test_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("experiment names") {
  CHECK(ParseExperimentName("fig1") == ExperimentName::kFig1Sparsity);
  CHECK(ParseExperimentName("fig2") == ExperimentName::kFig2Boxplot);
  CHECK(ParseExperimentName("fig3") == ExperimentName::kFig3Means);
  CHECK(ParseExperimentName("fig4") == ExperimentName::kFig4Realizations);
  for (auto name : {ExperimentName::kFig1Sparsity, ExperimentName::kFig2Boxplot,
                    ExperimentName::kFig3Means, ExperimentName::kFig4Realizations,
                    ExperimentName::kConcentration}) {
    CHECK(ParseExperimentName(ToString(name)) == name);
  }
  CHECK_THROWS_AS(ParseExperimentName("fig9"), InvalidArgument);
}

TEST_CASE("rows for delta") {
  CHECK(RowsForDelta(0.5, 100) == 51);
  CHECK(RowsForDelta(0.4, 200) == 81);
  CHECK(RowsForDelta(0.1, 500) == 51);
}

TEST_CASE("order statistics") {
  const std::vector<double> x{4, 1, 3, 2};
  for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CHECK(Quantile(x, q) == doctest::Approx(QuantileOracle(x, q)));
  }
  CHECK(Quantile(x, 0.25) == doctest::Approx(1.75));
  const std::vector<double> y{2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(Mean(y) == doctest::Approx(5.0));
  CHECK(SampleSd(y) == doctest::Approx(std::sqrt(32.0 / 7.0)));
  CHECK_THROWS_AS(Quantile({}, 0.5), InvalidArgument);
  CHECK_THROWS_AS(Mean({}), InvalidArgument);
}

TEST_CASE("spec json") {
  CHECK_THROWS_AS(SpecFromJson(nlohmann::json::array()), ParseError);
  CHECK_THROWS_AS(SpecFromJson({{"trials", 3}}), ParseError);
  CHECK_THROWS_AS(SpecFromJson({{"name", "fig3"}, {"trials", "many"}}), ParseError);
  CHECK_THROWS_AS(SpecFromJson({{"name", "nope"}}), InvalidArgument);

  const ExperimentSpec s = SpecFromJson({{"name", "fig4"},
                                         {"n_values", {50, 60}},
                                         {"delta_values", {0.25}},
                                         {"p", 1.5},
                                         {"trials", 3},
                                         {"base_seed", 77},
                                         {"mc_samples", 4000},
                                         {"max_iters", 123}});
  CHECK(s.name == ExperimentName::kFig4Realizations);
  CHECK(s.n_values == std::vector<std::size_t>{50, 60});
  CHECK(s.solver.max_iters == 123);
  const ExperimentSpec back = SpecFromJson(ToJson(s));
  CHECK(back.n_values == s.n_values);
  CHECK(back.delta_values == s.delta_values);
  CHECK(back.p == s.p);
  CHECK(back.trials == s.trials);
  CHECK(back.base_seed == s.base_seed);
  CHECK(back.mc_samples == s.mc_samples);
}

TEST_CASE("spec validation") {
  ExperimentSpec s = ExperimentSpec::Defaults(ExperimentName::kConcentration);
  CHECK_NOTHROW(s.Validate());
  s.p = 2.5;
  CHECK_THROWS_AS(s.Validate(), InvalidArgument);
  s.p = 1.0;
  s.delta_values = {1.0};
  CHECK_THROWS_AS(s.Validate(), InvalidArgument);
  s.delta_values = {0.5};
  s.trials = 0;
  CHECK_THROWS_AS(s.Validate(), InvalidArgument);
  ExperimentSpec f = ExperimentSpec::Defaults(ExperimentName::kFig1Sparsity);
  f.m = 31;
  CHECK_THROWS_AS(f.Validate(), InvalidArgument);
}

TEST_CASE("fig1 outputs") {
  ScratchDir a("fig1a"), b("fig1b");
  ExperimentSpec s = ExperimentSpec::Defaults(ExperimentName::kFig1Sparsity);
  s.output_dir = a.path;
  const Fig1Result r = RunFig1(s);
  s.output_dir = b.path;
  RunFig1(s);

  CHECK(r.spinv.TotalSupport() == 100);
  CHECK(r.mpp.TotalSupport() == 300);
  const Eigen::MatrixXd am = r.a.values();
  CHECK((Eigen::MatrixXd(r.mpp.x.values()) - SvdPinv(am)).norm() <= 1e-9);
  CHECK((am * Eigen::MatrixXd(r.spinv.x.values()) - Eigen::MatrixXd::Identity(10, 10))
            .norm() <= 1e-8);
  CHECK(LoadMatrixCsv(a.path / "A.csv") == r.a);

  for (const char* file : {"A.csv", "mpp.csv", "spinv.csv", "spinv_support.csv",
                           "mpp_support.csv", "summary.json", "fig1.gp"}) {
    CAPTURE(file);
    REQUIRE(fs::exists(a.path / file));
    CHECK(ReadFile(a.path / file) == ReadFile(b.path / file));
  }
  const auto summary = nlohmann::json::parse(ReadFile(a.path / "summary.json"));
  CHECK(summary.at("spinv_total_support") == 100);
  const DenseMatrix support = LoadMatrixCsv(a.path / "spinv_support.csv");
  double ones = 0.0;
  for (double v : support.data()) ones += v;
  CHECK(ones == 100.0);
}

TEST_CASE("fig2 outputs") {
  ScratchDir a("fig2a"), b("fig2b");
  ExperimentSpec s = ExperimentSpec::Defaults(ExperimentName::kFig2Boxplot);
  s.repetitions = 2;
  s.draws = 6;
  s.base_seed = 5;
  s.output_dir = a.path;
  const Fig2Result r = RunFig2(s);
  s.output_dir = b.path;
  RunFig2(s);

  REQUIRE(r.experiments.size() == 2);
  for (std::size_t e = 0; e < 2; ++e) {
    const auto& ex = r.experiments[e];
    CHECK(ex.seed == MixSeed(5, e));
    CHECK(ex.submatrix_frobenius.size() == 6);
    SeededRng rng(ex.seed);
    const Eigen::MatrixXd am = GaussianMatrix(rng, 20, 30).values();
    CHECK(ex.mpp_frobenius == doctest::Approx(SvdPinv(am).norm()).epsilon(1e-10));
    CHECK(ex.mpp_frobenius <= ex.spinv_frobenius + 1e-12);
    for (double v : ex.submatrix_frobenius) CHECK(ex.mpp_frobenius <= v + 1e-12);
  }
  for (const char* file : {"fig2_norms.csv", "fig2_summary.json", "fig2.gp"}) {
    CAPTURE(file);
    REQUIRE(fs::exists(a.path / file));
    CHECK(ReadFile(a.path / file) == ReadFile(b.path / file));
  }
  const auto summary = nlohmann::json::parse(ReadFile(a.path / "fig2_summary.json"));
  for (std::size_t e = 0; e < 2; ++e) {
    const auto& sub = r.experiments[e].submatrix_frobenius;
    const double expected = *std::max_element(sub.begin(), sub.end()) / QuantileOracle(sub, 0.5);
    CHECK(summary.at("experiments").at(e).at("max_over_median").get<double>() ==
          doctest::Approx(expected));
  }
  const auto lines = Lines(ReadFile(a.path / "fig2_norms.csv"));
  CHECK(lines.size() == 13);
  CHECK(lines.front() ==
        "experiment,seed,draw,submatrix_frobenius,spinv_frobenius,mpp_frobenius");
}

TEST_CASE("concentration cells against an independent recomputation") {
  ScratchDir dir("conc");
  ExperimentSpec s = ExperimentSpec::Defaults(ExperimentName::kConcentration);
  s.n_values = {40};
  s.delta_values = {0.3, 0.5};
  s.p = 2.0;
  s.trials = 4;
  s.base_seed = 9;
  s.output_dir = dir.path;
  const ConcentrationResult r = RunConcentration(s);
  REQUIRE(r.records.size() == 8);
  REQUIRE(r.cells.size() == 2);

  for (std::size_t c = 0; c < 2; ++c) {
    const CellSummary& cell = r.cells[c];
    CHECK(cell.m == RowsForDelta(s.delta_values[c], 40));
    CHECK(cell.delta_exact == doctest::Approx((cell.m - 1) / 40.0));
    CHECK(cell.included + cell.excluded == 4);
    CHECK(cell.included == 4);
    std::vector<double> values;
    for (std::size_t t = 0; t < 4; ++t) {
      const TrialRecord& rec = r.records[c * 4 + t];
      CHECK(rec.seed == MixSeed(MixSeed(9, c), t));
      CHECK(rec.method == "mpp");
      SeededRng rng(rec.seed);
      const Eigen::MatrixXd am = GaussianMatrix(rng, cell.m, 40).values();
      const double expected = 40.0 / cell.m * SvdPinv(am).squaredNorm();
      CHECK(rec.frobenius_sq_scaled == doctest::Approx(expected).epsilon(1e-10));
      values.push_back(expected);
    }
    double mean = 0.0;
    for (double v : values) mean += v / 4.0;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    REQUIRE(cell.mean);
    CHECK(*cell.mean == doctest::Approx(mean).epsilon(1e-10));
    CHECK(*cell.sd == doctest::Approx(std::sqrt(ss / 3.0)).epsilon(1e-8));
    REQUIRE(cell.theory);
    const double d = cell.delta_exact;
    CHECK(cell.theory->alpha_star_sq == doctest::Approx(1.0 / (1.0 - d)));
    CHECK(*cell.relative_deviation ==
          doctest::Approx((mean - cell.theory->alpha_star_sq) / cell.theory->alpha_star_sq));
  }

  const auto records = Lines(ReadFile(dir.path / "records.csv"));
  CHECK(records.size() == 9);
  CHECK(records.front() == kTrialCsvHeader);
  const auto cells = Lines(ReadFile(dir.path / "cells.csv"));
  CHECK(cells.size() == 3);
  CHECK(cells[1].find("NA") == std::string::npos);
  CHECK(Lines(ReadFile(dir.path / "theory.csv")).size() == 3);
  CHECK(fs::exists(dir.path / "fig3.gp"));
  CHECK(fs::exists(dir.path / "fig4.gp"));
}

TEST_CASE("non-converged trials are excluded and the cell is reported missing") {
  ScratchDir dir("excl");
  ExperimentSpec s = ExperimentSpec::Defaults(ExperimentName::kFig3Means);
  s.n_values = {20};
  s.delta_values = {0.5};
  s.p = 1.5;
  s.trials = 3;
  s.mc_samples = 1000;
  s.solver.max_iters = 1;
  s.output_dir = dir.path;
  const ConcentrationResult r = RunConcentration(s);
  REQUIRE(r.cells.size() == 1);
  CHECK(r.cells[0].excluded == 3);
  CHECK(r.cells[0].included == 0);
  CHECK_FALSE(r.cells[0].mean);
  CHECK_FALSE(r.cells[0].relative_deviation);
  REQUIRE(r.cells[0].theory);
  CHECK(r.cells[0].theory->unverified_hypothesis);
  for (const auto& rec : r.records) CHECK(rec.excluded);

  const auto cells = Lines(ReadFile(dir.path / "cells.csv"));
  CHECK(cells[1].find(",NA,NA,") != std::string::npos);
  const auto summary = nlohmann::json::parse(ReadFile(dir.path / "summary.json"));
  CHECK(summary.at("missing_cells") == 1);
  CHECK(fs::exists(dir.path / "fig3.gp"));
  CHECK_FALSE(fs::exists(dir.path / "fig4.gp"));
}

TEST_CASE("dispatch") {
  ExperimentSpec s = ExperimentSpec::Defaults(ExperimentName::kFig1Sparsity);
  const nlohmann::json out = RunExperiment(s);
  CHECK(out.at("experiment") == ToString(ExperimentName::kFig1Sparsity));
  CHECK(out.at("spinv_total_support") == 100);
  CHECK(out.at("mpp_total_support") == 300);
}

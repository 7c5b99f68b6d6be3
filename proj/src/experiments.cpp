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

#include "lpginv/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "lpginv/error.hpp"
#include "lpginv/matrix_io.hpp"
#include "lpginv/rng.hpp"

namespace lpginv {
namespace {

const std::map<std::string, ExperimentName>& NameTable() {
  static const std::map<std::string, ExperimentName> table = {
      {"fig1_sparsity", ExperimentName::kFig1Sparsity},
      {"fig1", ExperimentName::kFig1Sparsity},
      {"fig2_boxplot", ExperimentName::kFig2Boxplot},
      {"fig2", ExperimentName::kFig2Boxplot},
      {"fig3_means", ExperimentName::kFig3Means},
      {"fig3", ExperimentName::kFig3Means},
      {"fig4_realizations", ExperimentName::kFig4Realizations},
      {"fig4", ExperimentName::kFig4Realizations},
      {"concentration", ExperimentName::kConcentration},
  };
  return table;
}

std::string Fmt(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string("NA");
}

bool Writing(const ExperimentSpec& spec) { return !spec.output_dir.empty(); }

void WriteJson(const std::filesystem::path& path, const nlohmann::json& j) {
  WriteTextFile(path, j.dump(2) + "\n");
}

DenseMatrix SupportPattern(const GenInverse& g, double threshold) {
  const auto& x = g.x.values();
  RowMajorMatrix pattern(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double cutoff = threshold * x.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      pattern(r, c) = std::abs(x(r, c)) > cutoff ? 1.0 : 0.0;
    }
  }
  return DenseMatrix(std::move(pattern));
}

GenInverse ComputeInverse(const DenseMatrix& a, double p, const SolverConfig& cfg) {
  if (p == 2.0) return MppInverse(a, cfg);
  if (p == 1.0) return Spinv(a, cfg);
  return GinvP(a, p, cfg);
}

nlohmann::json Quartiles(const std::vector<double>& v) {
  return {{"min", Quantile(v, 0.0)},    {"q1", Quantile(v, 0.25)},
          {"median", Quantile(v, 0.5)}, {"q3", Quantile(v, 0.75)},
          {"max", Quantile(v, 1.0)},    {"mean", Mean(v)}};
}

std::string Fig3Script(const ExperimentSpec& spec) {
  std::ostringstream gp;
  gp << "# Mean of (n/m)||X||_F^2 per (n, delta) against the theory overlay.\n"
     << "set datafile separator ','\n"
     << "set key top left\n"
     << "set xlabel 'delta = (m-1)/n'\n"
     << "set ylabel '(n/m) ||X||_F^2'\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output 'fig3_means.png'\n"
     << "plot 'cells.csv' skip 1 using 4:($12 == 0 ? $16 : 1/0) with lines lw 2 "
        "title 'alpha*^2 (theory)'";
  for (std::size_t n : spec.n_values) {
    gp << ", \\\n     'cells.csv' skip 1 using ($1 == " << n
       << " ? $4 : 1/0):8 with linespoints title 'mean, n=" << n << "'";
  }
  gp << "\n";
  return gp.str();
}

std::string Fig4Script(const ExperimentSpec& spec) {
  std::ostringstream gp;
  gp << "# Individual realizations of (n/m)||X||_F^2.\n"
     << "set datafile separator ','\n"
     << "set xlabel 'delta = (m-1)/n'\n"
     << "set ylabel '(n/m) ||X||_F^2'\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output 'fig4_realizations.png'\n"
     << "plot 'cells.csv' skip 1 using 4:($12 == 0 ? $16 : 1/0) with lines lw 2 "
        "title 'alpha*^2 (theory)'";
  for (std::size_t n : spec.n_values) {
    gp << ", \\\n     'records.csv' skip 1 using ($3 == " << n
       << " && $9 == 0 ? ($2 - 1.0) / $3 : 1/0):6 with points title 'n=" << n << "'";
  }
  gp << "\n";
  return gp.str();
}

}  // namespace

std::string ToString(ExperimentName name) {
  switch (name) {
    case ExperimentName::kFig1Sparsity: return "fig1_sparsity";
    case ExperimentName::kFig2Boxplot: return "fig2_boxplot";
    case ExperimentName::kFig3Means: return "fig3_means";
    case ExperimentName::kFig4Realizations: return "fig4_realizations";
    case ExperimentName::kConcentration: return "concentration";
  }
  return "unknown";
}

ExperimentName ParseExperimentName(const std::string& text) {
  const auto it = NameTable().find(text);
  if (it == NameTable().end()) {
    throw InvalidArgument("unknown experiment '" + text + "'");
  }
  return it->second;
}

ExperimentSpec ExperimentSpec::Defaults(ExperimentName name) {
  ExperimentSpec spec;
  spec.name = name;
  switch (name) {
    case ExperimentName::kFig1Sparsity:
      spec.n_values = {30};
      spec.m = 10;
      spec.p = 1.0;
      spec.trials = 1;
      break;
    case ExperimentName::kFig2Boxplot:
      spec.n_values = {30};
      spec.m = 20;
      spec.p = 1.0;
      spec.trials = 1;
      break;
    case ExperimentName::kFig3Means:
    case ExperimentName::kFig4Realizations:
    case ExperimentName::kConcentration:
      spec.n_values = {100, 200, 500};
      spec.delta_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
      spec.p = 1.0;
      spec.trials = 10;
      break;
  }
  return spec;
}

void ExperimentSpec::Validate() const {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (!(p >= 1.0 && p <= 2.0)) throw InvalidArgument("p must lie in [1, 2]");
  if (n_values.empty()) throw InvalidArgument("n_values must not be empty");
  for (std::size_t n : n_values) {
    if (n == 0) throw InvalidArgument("n values must be positive");
  }
  for (double d : delta_values) {
    if (!(d > 0.0 && d < 1.0)) throw InvalidArgument("every delta must lie in (0, 1)");
  }
  const bool grid = name == ExperimentName::kFig3Means ||
                    name == ExperimentName::kFig4Realizations ||
                    name == ExperimentName::kConcentration;
  if (grid && delta_values.empty()) {
    throw InvalidArgument("delta_values must not be empty");
  }
  if (!grid && m && (*m == 0 || *m > n_values.front())) {
    throw InvalidArgument("need 1 <= m <= n");
  }
  if (name == ExperimentName::kFig2Boxplot && (repetitions < 1 || draws < 1)) {
    throw InvalidArgument("fig2 needs repetitions >= 1 and draws >= 1");
  }
  solver.Validate();
}

ExperimentSpec SpecFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("experiment config must be a JSON object");
  if (!j.contains("name")) throw ParseError("experiment config needs a 'name'");
  ExperimentSpec spec = ExperimentSpec::Defaults(
      ParseExperimentName(j.at("name").get<std::string>()));
  try {
    if (j.contains("n_values")) spec.n_values = j.at("n_values").get<std::vector<std::size_t>>();
    if (j.contains("delta_values")) spec.delta_values = j.at("delta_values").get<std::vector<double>>();
    if (j.contains("p")) spec.p = j.at("p").get<double>();
    if (j.contains("trials")) spec.trials = j.at("trials").get<std::size_t>();
    if (j.contains("base_seed")) spec.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (j.contains("output_dir")) spec.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("m")) spec.m = j.at("m").get<std::size_t>();
    if (j.contains("repetitions")) spec.repetitions = j.at("repetitions").get<std::size_t>();
    if (j.contains("draws")) spec.draws = j.at("draws").get<std::size_t>();
    if (j.contains("finite_n_theory")) spec.finite_n_theory = j.at("finite_n_theory").get<bool>();
    if (j.contains("mc_samples")) spec.mc_samples = j.at("mc_samples").get<std::size_t>();
    if (j.contains("max_iters")) spec.solver.max_iters = j.at("max_iters").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad experiment config: ") + e.what());
  }
  return spec;
}

nlohmann::json ToJson(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["name"] = ToString(spec.name);
  j["n_values"] = spec.n_values;
  j["delta_values"] = spec.delta_values;
  j["p"] = spec.p;
  j["trials"] = spec.trials;
  j["base_seed"] = spec.base_seed;
  j["output_dir"] = spec.output_dir.string();
  if (spec.m) j["m"] = *spec.m;
  j["repetitions"] = spec.repetitions;
  j["draws"] = spec.draws;
  j["finite_n_theory"] = spec.finite_n_theory;
  j["mc_samples"] = spec.mc_samples;
  return j;
}

std::size_t RowsForDelta(double delta, std::size_t n) {
  return static_cast<std::size_t>(std::llround(delta * static_cast<double>(n))) + 1;
}

std::string ToCsvRow(const TrialRecord& r) {
  std::ostringstream row;
  row << r.seed << ',' << r.m << ',' << r.n << ',' << FormatDouble(r.p) << ','
      << r.method << ',' << FormatDouble(r.frobenius_sq_scaled) << ','
      << FormatDouble(r.entrywise_l1) << ',' << r.total_support << ','
      << (r.excluded ? 1 : 0) << ',' << FormatDouble(r.wall_time_ms);
  return row.str();
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double Mean(const std::vector<double>& values) {
  if (values.empty()) throw InvalidArgument("mean of an empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double SampleSd(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

Fig1Result RunFig1(const ExperimentSpec& spec) {
  spec.Validate();
  const std::size_t n = spec.n_values.front();
  const std::size_t m = spec.m.value_or(10);
  SeededRng rng(spec.base_seed);
  Fig1Result result{GaussianMatrix(rng, m, n), {}, {}};
  result.mpp = MppInverse(result.a, spec.solver);
  result.spinv = Spinv(result.a, spec.solver);

  if (Writing(spec)) {
    const auto& dir = spec.output_dir;
    const double thr = spec.solver.sparsity_rel_threshold;
    SaveMatrixCsv(dir / "A.csv", result.a);
    SaveMatrixCsv(dir / "mpp.csv", result.mpp.x);
    SaveMatrixCsv(dir / "spinv.csv", result.spinv.x);
    SaveMatrixCsv(dir / "spinv_support.csv", SupportPattern(result.spinv, thr));
    SaveMatrixCsv(dir / "mpp_support.csv", SupportPattern(result.mpp, thr));
    nlohmann::json summary;
    summary["experiment"] = ToString(ExperimentName::kFig1Sparsity);
    summary["seed"] = spec.base_seed;
    summary["m"] = m;
    summary["n"] = n;
    summary["spinv_total_support"] = result.spinv.TotalSupport();
    summary["mpp_total_support"] = result.mpp.TotalSupport();
    summary["spinv_per_column_support"] = result.spinv.per_column_support;
    summary["spinv_frobenius_sq"] = result.spinv.frobenius_sq;
    summary["mpp_frobenius_sq"] = result.mpp.frobenius_sq;
    summary["spinv_entrywise_l1"] = result.spinv.entrywise_l1;
    summary["mpp_entrywise_l1"] = result.mpp.entrywise_l1;
    summary["spinv_nonunique_risk"] = result.spinv.NonuniqueRisk();
    std::vector<std::string> statuses;
    for (SolveStatus s : result.spinv.per_column_status) statuses.emplace_back(ToString(s));
    summary["spinv_per_column_status"] = statuses;
    WriteJson(dir / "summary.json", summary);
    WriteTextFile(dir / "fig1.gp",
                  "# Support patterns of the MPP and the sparse pseudoinverse.\n"
                  "set datafile separator ','\n"
                  "set terminal pngcairo size 900,500\n"
                  "set output 'fig1_sparsity.png'\n"
                  "set multiplot layout 1,2\n"
                  "set palette gray negative\n"
                  "unset colorbox\n"
                  "set title 'MPP'\n"
                  "plot 'mpp_support.csv' matrix with image notitle\n"
                  "set title 'spinv'\n"
                  "plot 'spinv_support.csv' matrix with image notitle\n"
                  "unset multiplot\n");
  }
  return result;
}

Fig2Result RunFig2(const ExperimentSpec& spec) {
  spec.Validate();
  const std::size_t n = spec.n_values.front();
  const std::size_t m = spec.m.value_or(20);
  Fig2Result result;
  for (std::size_t r = 0; r < spec.repetitions; ++r) {
    Fig2Experiment e;
    e.seed = MixSeed(spec.base_seed, r);
    SeededRng rng(e.seed);
    const DenseMatrix a = GaussianMatrix(rng, m, n);
    e.spinv_frobenius = std::sqrt(Spinv(a, spec.solver).frobenius_sq);
    e.mpp_frobenius = std::sqrt(MppInverse(a, spec.solver).frobenius_sq);
    for (std::size_t d = 0; d < spec.draws; ++d) {
      e.submatrix_frobenius.push_back(
          std::sqrt(SubmatrixInverse(a, rng, spec.solver).frobenius_sq));
    }
    result.experiments.push_back(std::move(e));
  }

  if (Writing(spec)) {
    const auto& dir = spec.output_dir;
    std::ostringstream csv;
    csv << "experiment,seed,draw,submatrix_frobenius,spinv_frobenius,mpp_frobenius\n";
    nlohmann::json summary;
    summary["experiment"] = ToString(ExperimentName::kFig2Boxplot);
    summary["base_seed"] = spec.base_seed;
    summary["m"] = m;
    summary["n"] = n;
    nlohmann::json per = nlohmann::json::array();
    for (std::size_t r = 0; r < result.experiments.size(); ++r) {
      const auto& e = result.experiments[r];
      for (std::size_t d = 0; d < e.submatrix_frobenius.size(); ++d) {
        csv << r << ',' << e.seed << ',' << d << ','
            << FormatDouble(e.submatrix_frobenius[d]) << ','
            << FormatDouble(e.spinv_frobenius) << ',' << FormatDouble(e.mpp_frobenius)
            << '\n';
      }
      per.push_back({{"experiment", r},
                     {"seed", e.seed},
                     {"submatrix", Quartiles(e.submatrix_frobenius)},
                     {"spinv_frobenius", e.spinv_frobenius},
                     {"mpp_frobenius", e.mpp_frobenius},
                     {"max_over_median",
                      Quantile(e.submatrix_frobenius, 1.0) /
                          Quantile(e.submatrix_frobenius, 0.5)}});
    }
    summary["experiments"] = per;
    WriteTextFile(dir / "fig2_norms.csv", csv.str());
    WriteJson(dir / "fig2_summary.json", summary);
    std::ostringstream gp;
    gp << "# Frobenius norms of random submatrix inverses against spinv.\n"
       << "set datafile separator ','\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output 'fig2_boxplot.png'\n"
       << "set style data boxplot\n"
       << "set xlabel 'experiment'\n"
       << "set ylabel '||X||_F'\n"
       << "set logscale y\n"
       << "plot 'fig2_norms.csv' skip 1 using (1+$1):4:(0.5):1 title 'submatrix inverse', \\\n"
       << "     '' skip 1 using (1+$1):5 with points pt 7 title 'spinv'\n";
    WriteTextFile(dir / "fig2.gp", gp.str());
  }
  return result;
}

ConcentrationResult RunConcentration(const ExperimentSpec& spec) {
  spec.Validate();
  ConcentrationResult result;
  const bool interior_p = spec.p != 1.0 && spec.p != 2.0;
  std::size_t cell_index = 0;
  for (std::size_t n : spec.n_values) {
    for (double delta : spec.delta_values) {
      const std::uint64_t cell_seed = MixSeed(spec.base_seed, cell_index++);
      CellSummary cell;
      cell.n = n;
      cell.m = RowsForDelta(delta, n);
      cell.delta = delta;
      cell.delta_exact = static_cast<double>(cell.m - 1) / static_cast<double>(n);
      cell.trials = spec.trials;
      if (cell.m > n) throw InvalidArgument("delta too large for n");

      std::vector<double> values;
      for (std::size_t t = 0; t < spec.trials; ++t) {
        TrialRecord rec;
        rec.seed = MixSeed(cell_seed, t);
        rec.m = cell.m;
        rec.n = n;
        rec.p = spec.p;
        SeededRng rng(rec.seed);
        const DenseMatrix a = GaussianMatrix(rng, cell.m, n);
        const auto start = std::chrono::steady_clock::now();
        const GenInverse g = ComputeInverse(a, spec.p, spec.solver);
        rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
        rec.method = g.MethodName();
        rec.frobenius_sq_scaled =
            static_cast<double>(n) / static_cast<double>(cell.m) * g.frobenius_sq;
        rec.entrywise_l1 = g.entrywise_l1;
        rec.total_support = g.TotalSupport();
        rec.excluded = g.NonuniqueRisk() || !g.AllConverged();
        if (rec.excluded) {
          ++cell.excluded;
        } else {
          ++cell.included;
          values.push_back(rec.frobenius_sq_scaled);
        }
        result.records.push_back(std::move(rec));
      }
      if (!values.empty()) {
        cell.mean = Mean(values);
        cell.sd = SampleSd(values);
      }

      TheoryQuery q;
      q.p = spec.p;
      q.delta = cell.delta_exact;
      q.mc_samples = spec.mc_samples;
      q.seed = cell_seed;
      if (spec.finite_n_theory || interior_p) q.n = n;
      // The projection onto the l^(p*) ball dominates the cost for interior
      // p; the pathwise slope needs far fewer Monte-Carlo passes.
      if (interior_p) q.slope = TheoryQuery::Slope::kPathwise;
      try {
        cell.theory = AlphaStar(q);
      } catch (const NumericalFailure&) {
        cell.theory.reset();
      }
      if (cell.theory && cell.mean) {
        cell.relative_deviation =
            (*cell.mean - cell.theory->alpha_star_sq) / cell.theory->alpha_star_sq;
      }
      result.cells.push_back(std::move(cell));
    }
  }

  if (Writing(spec)) {
    const auto& dir = spec.output_dir;
    std::ostringstream records;
    records << kTrialCsvHeader << '\n';
    for (const auto& r : result.records) records << ToCsvRow(r) << '\n';
    WriteTextFile(dir / "records.csv", records.str());

    std::ostringstream cells;
    cells << "n,m,delta,delta_exact,trials,included,excluded,mean,sd,t_star,D,"
             "theory_missing,alpha_star,stderr,theory_method,alpha_star_sq,"
             "relative_deviation\n";
    std::ostringstream theory;
    theory << kTheoryCsvHeader << '\n';
    for (const auto& c : result.cells) {
      cells << c.n << ',' << c.m << ',' << FormatDouble(c.delta) << ','
            << FormatDouble(c.delta_exact) << ',' << c.trials << ',' << c.included
            << ',' << c.excluded << ',' << Fmt(c.mean) << ',' << Fmt(c.sd) << ',';
      if (c.theory) {
        cells << FormatDouble(c.theory->t_star) << ','
              << FormatDouble(c.theory->d_at_tstar) << ",0,"
              << FormatDouble(c.theory->alpha_star) << ','
              << FormatDouble(c.theory->stderr_d) << ','
              << ToString(c.theory->method) << ','
              << FormatDouble(c.theory->alpha_star_sq) << ',';
        theory << ToCsvRow(*c.theory) << '\n';
      } else {
        cells << "NA,NA,1,NA,NA,NA,NA,";
      }
      cells << Fmt(c.relative_deviation) << '\n';
    }
    WriteTextFile(dir / "cells.csv", cells.str());
    WriteTextFile(dir / "theory.csv", theory.str());

    nlohmann::json summary;
    summary["experiment"] = ToString(spec.name);
    summary["spec"] = ToJson(spec);
    summary["records"] = result.records.size();
    summary["missing_cells"] = std::count_if(
        result.cells.begin(), result.cells.end(),
        [](const CellSummary& c) { return !c.mean.has_value(); });
    WriteJson(dir / "summary.json", summary);
    if (spec.name != ExperimentName::kFig4Realizations) {
      WriteTextFile(dir / "fig3.gp", Fig3Script(spec));
    }
    if (spec.name != ExperimentName::kFig3Means) {
      WriteTextFile(dir / "fig4.gp", Fig4Script(spec));
    }
  }
  return result;
}

nlohmann::json RunExperiment(const ExperimentSpec& spec) {
  nlohmann::json out;
  out["experiment"] = ToString(spec.name);
  out["output_dir"] = spec.output_dir.string();
  switch (spec.name) {
    case ExperimentName::kFig1Sparsity: {
      const Fig1Result r = RunFig1(spec);
      out["spinv_total_support"] = r.spinv.TotalSupport();
      out["mpp_total_support"] = r.mpp.TotalSupport();
      break;
    }
    case ExperimentName::kFig2Boxplot: {
      const Fig2Result r = RunFig2(spec);
      nlohmann::json medians = nlohmann::json::array();
      for (const auto& e : r.experiments) {
        medians.push_back({{"submatrix_median", Quantile(e.submatrix_frobenius, 0.5)},
                           {"spinv", e.spinv_frobenius}});
      }
      out["experiments"] = medians;
      break;
    }
    case ExperimentName::kFig3Means:
    case ExperimentName::kFig4Realizations:
    case ExperimentName::kConcentration: {
      const ConcentrationResult r = RunConcentration(spec);
      out["records"] = r.records.size();
      nlohmann::json cells = nlohmann::json::array();
      for (const auto& c : r.cells) {
        nlohmann::json cj = {{"n", c.n}, {"m", c.m}, {"delta_exact", c.delta_exact},
                             {"included", c.included}, {"excluded", c.excluded}};
        cj["mean"] = c.mean ? nlohmann::json(*c.mean) : nlohmann::json(nullptr);
        cj["alpha_star_sq"] = c.theory ? nlohmann::json(c.theory->alpha_star_sq)
                                       : nlohmann::json(nullptr);
        cells.push_back(cj);
      }
      out["cells"] = cells;
      break;
    }
  }
  return out;
}

}  // namespace lpginv

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

#include "lpginv/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "lpginv/bp_solver.hpp"
#include "lpginv/error.hpp"
#include "lpginv/experiments.hpp"
#include "lpginv/geninv.hpp"
#include "lpginv/rng.hpp"
#include "lpginv/special_functions.hpp"
#include "lpginv/theory.hpp"

namespace lpginv {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Instance {
  std::string label;
  DenseMatrix a;
  GenInverse mpp;
  GenInverse spinv;
  GenInverse submatrix;
};

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double ScaledFrobenius(const GenInverse& g, std::size_t m, std::size_t n) {
  return static_cast<double>(n) / static_cast<double>(m) * g.frobenius_sq;
}

class Runner {
 public:
  explicit Runner(const AcceptanceOptions& options) : options_(options) {}

  std::vector<CriterionResult> Run() {
    Record(1, "mpp_concentration", [this] { return MppConcentration(); });
    Record(2, "spinv_concentration", [this] { return SpinvConcentration(); });
    Record(3, "exact_sparsity", [this] { return ExactSparsity(); });
    Record(4, "l1_dominance", [this] { return L1Dominance(); });
    Record(5, "frobenius_ordering", [this] { return FrobeniusOrdering(); });
    Record(6, "oracle_equivalence", [this] { return OracleEquivalence(); });
    Record(7, "theta_identity", [this] { return ThetaIdentity(); });
    Record(8, "d1_sandwich", [this] { return D1Sandwich(); });
    Record(9, "fig2_median_ordering", [this] { return Fig2Ordering(); });
    Record(10, "certificate_soundness", [this] { return CertificateSoundness(); });
    Record(11, "variance_shrinkage", [this] { return VarianceShrinkage(); });
    return results_;
  }

 private:
  struct Outcome {
    bool passed;
    std::string detail;
  };

  template <typename F>
  void Record(int id, const std::string& name, F&& body) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    const auto start = Clock::now();
    try {
      const Outcome o = body();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = SecondsSince(start);
    results_.push_back(r);
    if (options_.on_result) options_.on_result(r);
  }

  std::uint64_t Seed(int id) const { return MixSeed(options_.seed, id); }

  Instance Build(const std::string& label, std::uint64_t seed, std::size_t m,
                 std::size_t n) {
    SeededRng rng(seed);
    Instance inst;
    inst.label = label;
    inst.a = GaussianMatrix(rng, m, n);
    inst.mpp = MppInverse(inst.a);
    inst.spinv = Spinv(inst.a);
    inst.submatrix = SubmatrixInverse(inst.a, rng);
    return inst;
  }

  Outcome MppConcentration() {
    constexpr std::size_t n = 500;
    const std::size_t m = RowsForDelta(0.5, n);
    const double delta = static_cast<double>(m - 1) / n;
    const double target = std::pow(LimitAlphaStarL2(delta), 2);
    std::vector<double> values;
    double mpp_seconds = 0.0;
    for (std::size_t s = 0; s < 10; ++s) {
      SeededRng rng(MixSeed(Seed(1), s));
      DenseMatrix a = GaussianMatrix(rng, m, n);
      const auto start = Clock::now();
      GenInverse mpp = MppInverse(a);
      mpp_seconds += SecondsSince(start);
      values.push_back(ScaledFrobenius(mpp, m, n));
      // Kept for criteria 4 and 5.
      Instance inst;
      inst.label = "c1/" + std::to_string(s);
      inst.spinv = Spinv(a);
      inst.submatrix = SubmatrixInverse(a, rng);
      inst.mpp = std::move(mpp);
      inst.a = std::move(a);
      pool_.push_back(std::move(inst));
    }
    const double mean = Mean(values);
    const double rel = std::abs(mean - target) / target;
    return {rel <= 0.05 && mpp_seconds < 60.0,
            "mean=" + Num(mean) + " target=" + Num(target) + " rel_dev=" + Num(rel) +
                " mpp_time=" + Num(mpp_seconds) + "s"};
  }

  Outcome SpinvConcentration() {
    constexpr std::size_t n = 400;
    const std::size_t m = RowsForDelta(0.5, n);
    const double delta = static_cast<double>(m - 1) / n;
    const double target = std::pow(LimitAlphaStarL1(delta), 2);
    std::vector<double> values;
    double spinv_seconds = 0.0;
    for (std::size_t s = 0; s < 10; ++s) {
      SeededRng rng(MixSeed(Seed(2), s));
      Instance inst;
      inst.label = "c2/" + std::to_string(s);
      inst.a = GaussianMatrix(rng, m, n);
      const auto start = Clock::now();
      inst.spinv = Spinv(inst.a);
      spinv_seconds += SecondsSince(start);
      inst.mpp = MppInverse(inst.a);
      inst.submatrix = SubmatrixInverse(inst.a, rng);
      values.push_back(ScaledFrobenius(inst.spinv, m, n));
      pool_.push_back(std::move(inst));
    }
    const double mean = Mean(values);
    const double rel = std::abs(mean - target) / target;
    return {rel <= 0.10 && spinv_seconds < 300.0,
            "mean=" + Num(mean) + " target=" + Num(target) + " rel_dev=" + Num(rel) +
                " spinv_time=" + Num(spinv_seconds) + "s"};
  }

  Outcome ExactSparsity() {
    std::size_t bad = 0;
    std::string first_bad;
    for (std::size_t m : {10, 20}) {
      for (std::size_t s = 0; s < 20; ++s) {
        Instance inst = Build("c3/" + std::to_string(m) + "x30/" + std::to_string(s),
                              MixSeed(MixSeed(Seed(3), m), s), m, 30);
        if (inst.spinv.TotalSupport() != m * m) {
          if (bad++ == 0) {
            first_bad = inst.label + " support=" +
                        std::to_string(inst.spinv.TotalSupport());
          }
        }
        sparsity_pool_.push_back(pool_.size());
        pool_.push_back(std::move(inst));
      }
    }
    return {bad == 0, "40 instances, " + std::to_string(bad) + " with support != m^2" +
                          (bad ? " (first: " + first_bad + ")" : "")};
  }

  Outcome L1Dominance() {
    if (pool_.empty()) return {false, "no instances from criteria 1-3"};
    double worst = -1e300;
    std::string where;
    for (const auto& inst : pool_) {
      const double gap = inst.spinv.entrywise_l1 -
                         std::min(inst.mpp.entrywise_l1, inst.submatrix.entrywise_l1);
      if (gap > worst) {
        worst = gap;
        where = inst.label;
      }
    }
    return {worst <= 1e-6, std::to_string(pool_.size()) +
                               " instances, max(l1(spinv) - min(l1(mpp), l1(sub)))=" +
                               Num(worst) + " at " + where};
  }

  Outcome FrobeniusOrdering() {
    if (pool_.empty()) return {false, "no instances from criteria 1-3"};
    double worst = -1e300;
    std::string where;
    for (const auto& inst : pool_) {
      const double gap =
          std::sqrt(inst.mpp.frobenius_sq) - std::sqrt(inst.spinv.frobenius_sq);
      if (gap > worst) {
        worst = gap;
        where = inst.label;
      }
    }
    return {worst <= 1e-9, std::to_string(pool_.size()) +
                               " instances, max(fro(mpp) - fro(spinv))=" + Num(worst) +
                               " at " + where};
  }

  Outcome OracleEquivalence() {
    const auto start = Clock::now();
    SeededRng rng(Seed(6));
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const std::size_t m = 2 + rng.UniformIndex(2);
      const std::size_t n = 4 + rng.UniformIndex(3);
      const DenseMatrix a = GaussianMatrix(rng, m, n);
      Vector b(m);
      for (std::size_t i = 0; i < m; ++i) b[i] = rng.Normal();
      const double fast = SolveBp(a, b, 1.0).objective;
      const double exact = SolveOracle(a, b, 1.0).objective;
      worst = std::max(worst, std::abs(fast - exact));
    }
    const double secs = SecondsSince(start);
    return {worst <= 1e-6 && secs < 30.0,
            "100 instances, max |obj_bp - obj_oracle|=" + Num(worst) +
                " time=" + Num(secs) + "s"};
  }

  Outcome ThetaIdentity() {
    double worst = 0.0;
    double at = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = 0.01 * i;
      const double err =
          std::abs(Theta(t) - 0.5 * t * ThetaPrime(t) - Erfc(t / std::sqrt(2.0)));
      if (err > worst) {
        worst = err;
        at = t;
      }
    }
    return {worst <= 1e-10, "grid t=0:0.01:10, max error=" + Num(worst) + " at t=" + Num(at)};
  }

  Outcome D1Sandwich() {
    TheoryQuery q;
    q.p = 1.0;
    q.n = 100;
    q.mc_samples = 100000;
    q.seed = Seed(8);
    bool ok = true;
    std::ostringstream detail;
    for (double t : {0.5, 1.0, 2.0}) {
      const McEstimate est = MonteCarloD(q, t);
      const double hi = Theta(t);
      const double lo = hi - 1.0 / 100.0;
      const double slack = 3.0 * est.stderr_;
      const bool inside = est.estimate >= lo - slack && est.estimate <= hi + slack;
      ok = ok && inside;
      detail << "t=" << t << ": D=" << Num(est.estimate) << " band=[" << Num(lo)
             << "," << Num(hi) << "]+-" << Num(slack) << (inside ? "" : " OUT") << "; ";
    }
    return {ok, detail.str()};
  }

  Outcome Fig2Ordering() {
    ExperimentSpec spec = ExperimentSpec::Defaults(ExperimentName::kFig2Boxplot);
    spec.base_seed = Seed(9);
    const Fig2Result r = RunFig2(spec);
    bool ok = r.experiments.size() == 5;
    std::ostringstream detail;
    for (const auto& e : r.experiments) {
      const double med = Quantile(e.submatrix_frobenius, 0.5);
      ok = ok && med > e.spinv_frobenius;
      detail << "median=" << Num(med) << " spinv=" << Num(e.spinv_frobenius) << "; ";
    }
    return {ok, detail.str()};
  }

  Outcome CertificateSoundness() {
    std::size_t columns = 0;
    std::size_t uncertified = 0;
    for (std::size_t idx : sparsity_pool_) {
      for (SolveStatus s : pool_[idx].spinv.per_column_status) {
        ++columns;
        if (s != SolveStatus::kCertifiedUnique) ++uncertified;
      }
    }
    const bool part1 = !sparsity_pool_.empty() && uncertified == 0;

    const DenseMatrix a(2, 3, {1, 0, 1, 0, 1, 1});
    Vector b(2);
    b << 1, 1;
    const BpSolution oracle = SolveOracle(a, b, 1.0);
    const bool tie = oracle.minimizer_count > 1;
    const SolveStatus cert = Certify(a, oracle);
    const bool part2 = tie && cert != SolveStatus::kCertifiedUnique;

    std::ostringstream detail;
    detail << columns << " spinv columns, " << uncertified
           << " not certified_unique; hand-built instance: oracle minimizers="
           << oracle.minimizer_count << " objective=" << Num(oracle.objective)
           << " certify=" << ToString(cert);
    return {part1 && part2, detail.str()};
  }

  Outcome VarianceShrinkage() {
    bool ok = true;
    std::ostringstream detail;
    for (double p : {1.0, 2.0}) {
      ExperimentSpec spec = ExperimentSpec::Defaults(ExperimentName::kConcentration);
      spec.p = p;
      spec.n_values = {100, 200, 400};
      spec.delta_values = {0.4};
      spec.trials = 10;
      spec.base_seed = MixSeed(Seed(11), static_cast<std::uint64_t>(p));
      const ConcentrationResult r = RunConcentration(spec);
      detail << "p=" << p << " sd:";
      std::optional<double> prev;
      for (const auto& c : r.cells) {
        const bool have = c.sd.has_value() && c.included >= 2;
        detail << " n=" << c.n << ":" << (have ? Num(*c.sd) : std::string("NA"));
        if (!have) {
          ok = false;
          continue;
        }
        if (prev && !(*c.sd < *prev)) ok = false;
        prev = c.sd;
      }
      detail << "; ";
    }
    return {ok, detail.str()};
  }

  AcceptanceOptions options_;
  std::vector<CriterionResult> results_;
  std::vector<Instance> pool_;
  std::vector<std::size_t> sparsity_pool_;
};

}  // namespace

std::vector<CriterionResult> RunAcceptance(const AcceptanceOptions& options) {
  return Runner(options).Run();
}

std::string FormatResultLine(const CriterionResult& r) {
  std::ostringstream line;
  line << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << " " << r.name
       << " (" << Num(r.seconds) << "s): " << r.detail;
  return line.str();
}

nlohmann::json ToJson(const std::vector<CriterionResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"id", r.id},
                   {"name", r.name},
                   {"passed", r.passed},
                   {"detail", r.detail},
                   {"seconds", r.seconds}});
  }
  return arr;
}

}  // namespace lpginv

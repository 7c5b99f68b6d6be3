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

// lpginv command line front end. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpginv/lpginv.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct MatrixDeleter {
  void operator()(lpginv_matrix* m) const { lpginv_matrix_destroy(m); }
};
struct GeninvDeleter {
  void operator()(lpginv_geninv* g) const { lpginv_geninv_destroy(g); }
};
struct StringDeleter {
  void operator()(char* s) const { lpginv_string_free(s); }
};
using MatrixPtr = std::unique_ptr<lpginv_matrix, MatrixDeleter>;
using GeninvPtr = std::unique_ptr<lpginv_geninv, GeninvDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Thrown to unwind with an exit code after printing a message.
struct Exit {
  int code;
};

void Check(lpginv_status status) {
  if (status == LPGINV_OK) return;
  std::cerr << "error: " << lpginv_status_name(status) << ": " << lpginv_last_error()
            << "\n";
  throw Exit{status == LPGINV_ERR_INVALID_ARGUMENT ? kExitUsage : kExitFailure};
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct InverseArgs {
  std::string in;
  std::string out;
  std::string report;
  double p = 1.0;
  std::size_t max_iters = 0;
};

int RunInverse(const std::string& kind, const InverseArgs& args) {
  lpginv_matrix* raw = nullptr;
  Check(lpginv_matrix_load_csv(args.in.c_str(), &raw));
  MatrixPtr a(raw);

  lpginv_solver_config cfg;
  lpginv_solver_config_default(&cfg);
  if (args.max_iters > 0) cfg.max_iters = args.max_iters;

  lpginv_geninv* g_raw = nullptr;
  if (kind == "mpp") {
    Check(lpginv_mpp(a.get(), &cfg, &g_raw));
  } else if (kind == "spinv") {
    Check(lpginv_spinv(a.get(), &cfg, &g_raw));
  } else {
    Check(lpginv_ginv_p(a.get(), args.p, &cfg, &g_raw));
  }
  GeninvPtr g(g_raw);

  lpginv_matrix* x_raw = nullptr;
  Check(lpginv_geninv_matrix(g.get(), &x_raw));
  MatrixPtr x(x_raw);
  Check(lpginv_matrix_save_csv(x.get(), args.out.c_str()));

  int passed = 0;
  char* report_raw = nullptr;
  Check(lpginv_validate(a.get(), g.get(), &cfg, &passed, &report_raw));
  StringPtr report(report_raw);
  if (!args.report.empty()) {
    std::ofstream f(args.report);
    f << report.get() << "\n";
    if (!f) {
      std::cerr << "error: cannot write " << args.report << "\n";
      return kExitFailure;
    }
  }

  std::cout << "rows = " << lpginv_matrix_rows(x.get()) << "\n"
            << "cols = " << lpginv_matrix_cols(x.get()) << "\n"
            << "total_support = " << lpginv_geninv_total_support(g.get()) << "\n"
            << "frobenius_sq = " << Num(lpginv_geninv_frobenius_sq(g.get())) << "\n"
            << "entrywise_l1 = " << Num(lpginv_geninv_entrywise_l1(g.get())) << "\n"
            << "nonunique_risk = " << lpginv_geninv_nonunique_risk(g.get()) << "\n"
            << "validation = " << (passed ? "passed" : "FAILED") << "\n";
  return passed ? kExitOk : kExitFailure;
}

struct TheoryArgs {
  double p = 1.0;
  double delta = 0.5;
  std::optional<std::size_t> n;
  bool limit = false;
  std::size_t mc_samples = 0;
  std::optional<std::uint64_t> seed;
  bool json = false;
  bool pathwise = false;
};

int RunTheory(const TheoryArgs& args) {
  lpginv_theory_query q;
  lpginv_theory_query_default(&q);
  q.p = args.p;
  q.delta = args.delta;
  q.n = args.limit ? 0 : args.n.value_or(0);
  if (args.mc_samples > 0) q.mc_samples = args.mc_samples;
  if (args.seed) q.seed = *args.seed;
  q.pathwise_slope = args.pathwise ? 1 : 0;
  lpginv_theory_result r;
  Check(lpginv_alpha_star(&q, &r));
  if (args.json) {
    char* raw = nullptr;
    Check(lpginv_theory_result_to_json(&r, &raw));
    StringPtr text(raw);
    std::cout << text.get() << "\n";
    return kExitOk;
  }
  std::cout << "p = " << Num(r.p) << "\n"
            << "delta = " << Num(r.delta) << "\n"
            << "n = " << (r.n ? std::to_string(r.n) : std::string("inf")) << "\n"
            << "method = " << (r.monte_carlo ? "monte_carlo_finite_n" : "closed_form_limit")
            << "\n"
            << (r.t_star_normalized ? "t_star_over_sqrt_n = " : "t_star = ")
            << Num(r.t_star) << "\n"
            << "D = " << Num(r.d_at_tstar) << "\n"
            << "alpha_star = " << Num(r.alpha_star) << "\n"
            << "alpha_star_sq = " << Num(r.alpha_star_sq) << "\n";
  if (r.monte_carlo) std::cout << "stderr_D = " << Num(r.stderr_d) << "\n";
  if (r.unverified_hypothesis) {
    std::cout << "note = concentration hypothesis unverified for this p\n";
  }
  return kExitOk;
}

struct ExperimentArgs {
  std::string name;
  std::string config;
  std::vector<std::size_t> n;
  std::optional<std::size_t> m;
  std::vector<double> delta;
  std::optional<double> p;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  std::optional<std::size_t> mc_samples;
};

int RunExperiment(const ExperimentArgs& args) {
  nlohmann::json spec = nlohmann::json::object();
  if (!args.config.empty()) {
    std::ifstream f(args.config);
    if (!f) {
      std::cerr << "error: cannot read config " << args.config << "\n";
      return kExitFailure;
    }
    try {
      spec = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: bad config " << args.config << ": " << e.what() << "\n";
      return kExitFailure;
    }
  }
  spec["name"] = args.name;
  if (!args.n.empty()) spec["n_values"] = args.n;
  if (!args.delta.empty()) spec["delta_values"] = args.delta;
  if (args.m) spec["m"] = *args.m;
  if (args.p) spec["p"] = *args.p;
  if (args.trials) spec["trials"] = *args.trials;
  if (args.seed) spec["base_seed"] = *args.seed;
  if (args.mc_samples) spec["mc_samples"] = *args.mc_samples;
  if (!args.output_dir.empty()) {
    spec["output_dir"] = args.output_dir;
  } else if (!spec.contains("output_dir")) {
    spec["output_dir"] = "results/" + args.name;
  }
  char* raw = nullptr;
  Check(lpginv_experiment_run(spec.dump().c_str(), &raw));
  StringPtr summary(raw);
  std::cout << summary.get() << "\n";
  return kExitOk;
}

void PrintLine(const char* line, void*) { std::cout << line << std::endl; }

int RunVerify(std::uint64_t seed, const std::string& report_path) {
  int passed = 0;
  char* raw = nullptr;
  Check(lpginv_verify(seed, &PrintLine, nullptr, &passed, &raw));
  StringPtr report(raw);
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    f << report.get() << "\n";
  }
  std::cout << (passed ? "all criteria passed" : "some criteria FAILED") << "\n";
  return passed ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lp-minimal generalized inverses: solvers, theory and experiments",
               "lpginv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lpginv_version()));

  InverseArgs inv;
  auto add_inverse = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--in", inv.in, "input matrix CSV")->required();
    sub->add_option("--out", inv.out, "output CSV for X")->required();
    sub->add_option("--report", inv.report, "write the validation report JSON here");
    sub->add_option("--max-iters", inv.max_iters, "splitting iteration cap");
    return sub;
  };
  CLI::App* mpp = add_inverse("mpp", "Moore-Penrose pseudoinverse");
  CLI::App* spinv = add_inverse("spinv", "sparse pseudoinverse (columnwise l1)");
  CLI::App* ginv = add_inverse("ginv", "columnwise l^p minimal generalized inverse");
  ginv->add_option("--p", inv.p, "exponent in [1, 2]")->required();

  TheoryArgs th;
  CLI::App* theory = app.add_subcommand("theory", "limiting or finite-n alpha*");
  theory->add_option("--p", th.p, "exponent in [1, 2]")->required();
  theory->add_option("--delta", th.delta, "(m - 1) / n in (0, 1)")->required();
  auto* n_opt = theory->add_option("--n", th.n, "finite dimension (Monte-Carlo)");
  auto* limit_flag = theory->add_flag("--limit", th.limit, "n -> infinity limit");
  n_opt->excludes(limit_flag);
  theory->add_option("--mc-samples", th.mc_samples, "Monte-Carlo sample count");
  theory->add_option("--seed", th.seed, "Monte-Carlo seed");
  theory->add_flag("--pathwise", th.pathwise,
                   "finite n: exact slope of the sample mean instead of a central difference");
  theory->add_flag("--json", th.json, "print JSON");

  ExperimentArgs ex;
  CLI::App* experiment = app.add_subcommand("experiment", "run a named experiment");
  experiment
      ->add_option("name", ex.name,
                   "fig1_sparsity|fig2_boxplot|fig3_means|fig4_realizations|"
                   "concentration (aliases fig1..fig4)")
      ->required();
  experiment->add_option("--config", ex.config, "JSON spec; flags override it");
  experiment->add_option("--n", ex.n, "column counts")->delimiter(',');
  experiment->add_option("--m", ex.m, "row count (fig1, fig2)");
  experiment->add_option("--delta", ex.delta, "delta values")->delimiter(',');
  experiment->add_option("--p", ex.p, "exponent in [1, 2]");
  experiment->add_option("--trials", ex.trials, "trials per cell");
  experiment->add_option("--seed", ex.seed, "base seed");
  experiment->add_option("--output-dir", ex.output_dir, "default results/<name>");
  experiment->add_option("--mc-samples", ex.mc_samples, "samples for finite-n theory");

  std::uint64_t verify_seed = 20260101;
  std::string verify_report;
  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--seed", verify_seed, "suite seed");
  verify->add_option("--report", verify_report, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*mpp) return RunInverse("mpp", inv);
    if (*spinv) return RunInverse("spinv", inv);
    if (*ginv) return RunInverse("ginv", inv);
    if (*theory) return RunTheory(th);
    if (*experiment) return RunExperiment(ex);
    if (*verify) return RunVerify(verify_seed, verify_report);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}

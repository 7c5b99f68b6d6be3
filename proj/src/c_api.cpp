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

#include "lpginv/lpginv.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "lpginv/acceptance.hpp"
#include "lpginv/bp_solver.hpp"
#include "lpginv/dense_matrix.hpp"
#include "lpginv/error.hpp"
#include "lpginv/experiments.hpp"
#include "lpginv/geninv.hpp"
#include "lpginv/linalg.hpp"
#include "lpginv/matrix_io.hpp"
#include "lpginv/rng.hpp"
#include "lpginv/theory.hpp"

struct lpginv_matrix {
  lpginv::DenseMatrix value;
};

struct lpginv_geninv {
  lpginv::GenInverse value;
};

namespace {

thread_local std::string g_last_error;

lpginv_status FromKind(lpginv::ErrorKind kind) {
  using lpginv::ErrorKind;
  switch (kind) {
    case ErrorKind::kDimension: return LPGINV_ERR_DIMENSION;
    case ErrorKind::kSingular: return LPGINV_ERR_SINGULAR;
    case ErrorKind::kDomain: return LPGINV_ERR_DOMAIN;
    case ErrorKind::kGuard: return LPGINV_ERR_GUARD;
    case ErrorKind::kInconsistent: return LPGINV_ERR_INCONSISTENT;
    case ErrorKind::kNumerical: return LPGINV_ERR_NUMERICAL;
    case ErrorKind::kIo: return LPGINV_ERR_IO;
    case ErrorKind::kParse: return LPGINV_ERR_PARSE;
    case ErrorKind::kInvalidArgument: return LPGINV_ERR_INVALID_ARGUMENT;
  }
  return LPGINV_ERR_INTERNAL;
}

template <typename F>
lpginv_status Guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return LPGINV_OK;
  } catch (const lpginv::Error& e) {
    g_last_error = e.what();
    return FromKind(e.kind());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return LPGINV_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LPGINV_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LPGINV_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LPGINV_ERR_INTERNAL;
  }
}

void Require(bool condition, const char* what) {
  if (!condition) throw lpginv::InvalidArgument(what);
}

lpginv::SolverConfig ToConfig(const lpginv_solver_config* c) {
  lpginv::SolverConfig cfg;
  if (c) {
    cfg.max_iters = c->max_iters;
    cfg.tol_primal = c->tol_primal;
    cfg.tol_dual = c->tol_dual;
    cfg.splitting_step = c->splitting_step;
    cfg.sparsity_rel_threshold = c->sparsity_rel_threshold;
    cfg.certificate_margin = c->certificate_margin;
    cfg.refine_interval = c->refine_interval;
    cfg.refine_pivot_budget = c->refine_pivot_budget;
  }
  cfg.Validate();
  return cfg;
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

lpginv_solve_status ToC(lpginv::SolveStatus s) {
  using lpginv::SolveStatus;
  switch (s) {
    case SolveStatus::kConverged: return LPGINV_SOLVE_CONVERGED;
    case SolveStatus::kMaxIters: return LPGINV_SOLVE_MAX_ITERS;
    case SolveStatus::kCertifiedUnique: return LPGINV_SOLVE_CERTIFIED_UNIQUE;
    case SolveStatus::kCertifiedNonuniqueRisk:
      return LPGINV_SOLVE_CERTIFIED_NONUNIQUE_RISK;
    case SolveStatus::kNotCertified: return LPGINV_SOLVE_NOT_CERTIFIED;
  }
  return LPGINV_SOLVE_NOT_CERTIFIED;
}

lpginv::TheoryResult FromC(const lpginv_theory_result& r) {
  lpginv::TheoryResult t;
  t.p = r.p;
  t.delta = r.delta;
  if (r.n > 0) t.n = r.n;
  t.t_star = r.t_star;
  t.t_star_normalized = r.t_star_normalized != 0;
  t.d_at_tstar = r.d_at_tstar;
  t.alpha_star = r.alpha_star;
  t.alpha_star_sq = r.alpha_star_sq;
  t.stderr_d = r.stderr_d;
  t.method = r.monte_carlo ? lpginv::TheoryMethod::kMonteCarloFiniteN
                           : lpginv::TheoryMethod::kClosedFormLimit;
  t.unverified_hypothesis = r.unverified_hypothesis != 0;
  return t;
}

template <typename Compute>
lpginv_status MakeInverse(const lpginv_matrix* a, lpginv_geninv** out,
                          Compute&& compute) {
  return Guard([&] {
    Require(a && out, "null argument");
    *out = new lpginv_geninv{compute(a->value)};
  });
}

}  // namespace

extern "C" {

const char* lpginv_last_error(void) { return g_last_error.c_str(); }

const char* lpginv_status_name(lpginv_status status) {
  switch (status) {
    case LPGINV_OK: return "ok";
    case LPGINV_ERR_DIMENSION: return "dimension_error";
    case LPGINV_ERR_SINGULAR: return "singularity_error";
    case LPGINV_ERR_DOMAIN: return "domain_error";
    case LPGINV_ERR_GUARD: return "guard_error";
    case LPGINV_ERR_INCONSISTENT: return "inconsistency_error";
    case LPGINV_ERR_NUMERICAL: return "numerical_failure";
    case LPGINV_ERR_IO: return "io_error";
    case LPGINV_ERR_PARSE: return "parse_error";
    case LPGINV_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LPGINV_ERR_INTERNAL: return "internal_error";
  }
  return "unknown_status";
}

const char* lpginv_version(void) { return "0.1.0"; }

void lpginv_string_free(char* text) { std::free(text); }

lpginv_status lpginv_matrix_create(size_t rows, size_t cols, const double* data,
                                   lpginv_matrix** out) {
  return Guard([&] {
    Require(out && (data || rows * cols == 0), "null argument");
    std::vector<double> values(data, data + rows * cols);
    *out = new lpginv_matrix{lpginv::DenseMatrix(rows, cols, std::move(values))};
  });
}

lpginv_status lpginv_matrix_gaussian(size_t rows, size_t cols, uint64_t seed,
                                     lpginv_matrix** out) {
  return Guard([&] {
    Require(out, "null argument");
    lpginv::SeededRng rng(seed);
    *out = new lpginv_matrix{lpginv::GaussianMatrix(rng, rows, cols)};
  });
}

lpginv_status lpginv_matrix_load_csv(const char* path, lpginv_matrix** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    *out = new lpginv_matrix{lpginv::LoadMatrixCsv(path)};
  });
}

lpginv_status lpginv_matrix_save_csv(const lpginv_matrix* m, const char* path) {
  return Guard([&] {
    Require(m && path, "null argument");
    lpginv::SaveMatrixCsv(path, m->value);
  });
}

size_t lpginv_matrix_rows(const lpginv_matrix* m) { return m ? m->value.rows() : 0; }
size_t lpginv_matrix_cols(const lpginv_matrix* m) { return m ? m->value.cols() : 0; }

const double* lpginv_matrix_data(const lpginv_matrix* m) {
  return m ? m->value.data().data() : nullptr;
}

void lpginv_matrix_destroy(lpginv_matrix* m) { delete m; }

void lpginv_solver_config_default(lpginv_solver_config* c) {
  if (!c) return;
  const lpginv::SolverConfig d;
  c->max_iters = d.max_iters;
  c->tol_primal = d.tol_primal;
  c->tol_dual = d.tol_dual;
  c->splitting_step = d.splitting_step;
  c->sparsity_rel_threshold = d.sparsity_rel_threshold;
  c->certificate_margin = d.certificate_margin;
  c->refine_interval = d.refine_interval;
  c->refine_pivot_budget = d.refine_pivot_budget;
}

lpginv_status lpginv_solve_bp(const lpginv_matrix* a, const double* b, double p,
                              const lpginv_solver_config* config, double* x_out,
                              double* objective, lpginv_solve_status* status) {
  return Guard([&] {
    Require(a && b && x_out, "null argument");
    const lpginv::SolverConfig cfg = ToConfig(config);
    const lpginv::Vector rhs = lpginv::ToVector({b, a->value.rows()});
    lpginv::BpSolution sol = lpginv::SolveBp(a->value, rhs, p, cfg);
    if (p == 1.0 && sol.status == lpginv::SolveStatus::kConverged) {
      sol.status = lpginv::Certify(a->value, sol, cfg);
    }
    for (Eigen::Index i = 0; i < sol.x.size(); ++i) x_out[i] = sol.x(i);
    if (objective) *objective = sol.objective;
    if (status) *status = ToC(sol.status);
  });
}

lpginv_status lpginv_mpp(const lpginv_matrix* a, const lpginv_solver_config* config,
                         lpginv_geninv** out) {
  return MakeInverse(a, out, [&](const lpginv::DenseMatrix& m) {
    return lpginv::MppInverse(m, ToConfig(config));
  });
}

lpginv_status lpginv_spinv(const lpginv_matrix* a, const lpginv_solver_config* config,
                           lpginv_geninv** out) {
  return MakeInverse(a, out, [&](const lpginv::DenseMatrix& m) {
    return lpginv::Spinv(m, ToConfig(config));
  });
}

lpginv_status lpginv_ginv_p(const lpginv_matrix* a, double p,
                            const lpginv_solver_config* config, lpginv_geninv** out) {
  return MakeInverse(a, out, [&](const lpginv::DenseMatrix& m) {
    return lpginv::GinvP(m, p, ToConfig(config));
  });
}

lpginv_status lpginv_submatrix_inverse(const lpginv_matrix* a, uint64_t seed,
                                       const lpginv_solver_config* config,
                                       lpginv_geninv** out) {
  return MakeInverse(a, out, [&](const lpginv::DenseMatrix& m) {
    lpginv::SeededRng rng(seed);
    return lpginv::SubmatrixInverse(m, rng, ToConfig(config));
  });
}

lpginv_status lpginv_geninv_matrix(const lpginv_geninv* g, lpginv_matrix** out) {
  return Guard([&] {
    Require(g && out, "null argument");
    *out = new lpginv_matrix{g->value.x};
  });
}

size_t lpginv_geninv_total_support(const lpginv_geninv* g) {
  return g ? g->value.TotalSupport() : 0;
}
double lpginv_geninv_frobenius_sq(const lpginv_geninv* g) {
  return g ? g->value.frobenius_sq : 0.0;
}
double lpginv_geninv_entrywise_l1(const lpginv_geninv* g) {
  return g ? g->value.entrywise_l1 : 0.0;
}
int lpginv_geninv_nonunique_risk(const lpginv_geninv* g) {
  return g && g->value.NonuniqueRisk() ? 1 : 0;
}

lpginv_status lpginv_geninv_to_json(const lpginv_geninv* g, char** out) {
  return Guard([&] {
    Require(g && out, "null argument");
    *out = CopyString(lpginv::ToJson(g->value).dump(2));
  });
}

lpginv_status lpginv_validate(const lpginv_matrix* a, const lpginv_geninv* g,
                              const lpginv_solver_config* config, int* all_passed,
                              char** report_json) {
  return Guard([&] {
    Require(a && g, "null argument");
    const lpginv::ValidationReport report =
        lpginv::Validate(a->value, g->value, ToConfig(config));
    if (all_passed) *all_passed = report.all_passed ? 1 : 0;
    if (report_json) *report_json = CopyString(lpginv::ToJson(report).dump(2));
  });
}

void lpginv_geninv_destroy(lpginv_geninv* g) { delete g; }

void lpginv_theory_query_default(lpginv_theory_query* q) {
  if (!q) return;
  const lpginv::TheoryQuery d;
  q->p = d.p;
  q->delta = d.delta;
  q->n = 0;
  q->mc_samples = d.mc_samples;
  q->seed = d.seed;
  q->theta_control_variate = d.theta_control_variate ? 1 : 0;
  q->pathwise_slope = d.slope == lpginv::TheoryQuery::Slope::kPathwise ? 1 : 0;
}

lpginv_status lpginv_alpha_star(const lpginv_theory_query* query,
                                lpginv_theory_result* out) {
  return Guard([&] {
    Require(query && out, "null argument");
    lpginv::TheoryQuery q;
    q.p = query->p;
    q.delta = query->delta;
    if (query->n > 0) q.n = query->n;
    q.mc_samples = query->mc_samples;
    q.seed = query->seed;
    q.theta_control_variate = query->theta_control_variate != 0;
    q.slope = query->pathwise_slope ? lpginv::TheoryQuery::Slope::kPathwise
                                    : lpginv::TheoryQuery::Slope::kCentralDifference;
    const lpginv::TheoryResult r = lpginv::AlphaStar(q);
    out->p = r.p;
    out->delta = r.delta;
    out->n = r.n.value_or(0);
    out->t_star = r.t_star;
    out->t_star_normalized = r.t_star_normalized ? 1 : 0;
    out->d_at_tstar = r.d_at_tstar;
    out->alpha_star = r.alpha_star;
    out->alpha_star_sq = r.alpha_star_sq;
    out->stderr_d = r.stderr_d;
    out->monte_carlo = r.method == lpginv::TheoryMethod::kMonteCarloFiniteN ? 1 : 0;
    out->unverified_hypothesis = r.unverified_hypothesis ? 1 : 0;
  });
}

lpginv_status lpginv_theory_result_to_json(const lpginv_theory_result* r, char** out) {
  return Guard([&] {
    Require(r && out, "null argument");
    *out = CopyString(lpginv::ToJson(FromC(*r)).dump(2));
  });
}

lpginv_status lpginv_experiment_run(const char* spec_json, char** summary_json) {
  return Guard([&] {
    Require(spec_json, "null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(spec_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw lpginv::ParseError(std::string("experiment spec is not valid JSON: ") +
                               e.what());
    }
    const lpginv::ExperimentSpec spec = lpginv::SpecFromJson(j);
    const nlohmann::json summary = lpginv::RunExperiment(spec);
    if (summary_json) *summary_json = CopyString(summary.dump(2));
  });
}

lpginv_status lpginv_verify(uint64_t seed, lpginv_progress_fn progress, void* user,
                            int* all_passed, char** report_json) {
  return Guard([&] {
    lpginv::AcceptanceOptions options;
    options.seed = seed;
    if (progress) {
      options.on_result = [&](const lpginv::CriterionResult& r) {
        progress(lpginv::FormatResultLine(r).c_str(), user);
      };
    }
    const auto results = lpginv::RunAcceptance(options);
    bool ok = true;
    for (const auto& r : results) ok = ok && r.passed;
    if (all_passed) *all_passed = ok ? 1 : 0;
    if (report_json) *report_json = CopyString(lpginv::ToJson(results).dump(2));
  });
}

}  // extern "C"

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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "lpginv/lpginv.h"

namespace {

std::string Take(char* text) {
  std::string s = text ? text : "";
  lpginv_string_free(text);
  return s;
}

struct Matrix {
  lpginv_matrix* m = nullptr;
  ~Matrix() { lpginv_matrix_destroy(m); }
};

struct Inverse {
  lpginv_geninv* g = nullptr;
  ~Inverse() { lpginv_geninv_destroy(g); }
};

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(lpginv_status_name(LPGINV_OK)) == "ok");
  CHECK(std::string(lpginv_status_name(LPGINV_ERR_SINGULAR)) == "singularity_error");
  CHECK(std::string(lpginv_version()).size() > 0);
}

TEST_CASE("matrix handles") {
  const double data[] = {1, 0, 1, 0, 1, 1};
  Matrix a;
  REQUIRE(lpginv_matrix_create(2, 3, data, &a.m) == LPGINV_OK);
  CHECK(lpginv_matrix_rows(a.m) == 2);
  CHECK(lpginv_matrix_cols(a.m) == 3);
  CHECK(lpginv_matrix_data(a.m)[2] == 1.0);

  const double bad[] = {1, NAN};
  Matrix b;
  CHECK(lpginv_matrix_create(1, 2, bad, &b.m) != LPGINV_OK);
  CHECK(b.m == nullptr);
  CHECK(std::string(lpginv_last_error()).size() > 0);
  CHECK(lpginv_matrix_create(1, 2, data, nullptr) == LPGINV_ERR_INVALID_ARGUMENT);

  const auto path = std::filesystem::temp_directory_path() / "lpginv_c_api_roundtrip.csv";
  REQUIRE(lpginv_matrix_save_csv(a.m, path.c_str()) == LPGINV_OK);
  Matrix c;
  REQUIRE(lpginv_matrix_load_csv(path.c_str(), &c.m) == LPGINV_OK);
  for (int i = 0; i < 6; ++i) CHECK(lpginv_matrix_data(c.m)[i] == data[i]);
  std::filesystem::remove(path);
  Matrix d;
  CHECK(lpginv_matrix_load_csv("/nonexistent/lpginv.csv", &d.m) == LPGINV_ERR_IO);
}

TEST_CASE("basis pursuit through the C API") {
  const double data[] = {1, 0, 1, 0, 1, 1};
  Matrix a;
  REQUIRE(lpginv_matrix_create(2, 3, data, &a.m) == LPGINV_OK);
  const double b[] = {1, 1};
  double x[3];
  double objective = 0.0;
  lpginv_solve_status status;
  REQUIRE(lpginv_solve_bp(a.m, b, 1.0, nullptr, x, &objective, &status) == LPGINV_OK);
  CHECK(std::abs(x[0]) <= 1e-9);
  CHECK(std::abs(x[1]) <= 1e-9);
  CHECK(x[2] == doctest::Approx(1.0));
  CHECK(objective == doctest::Approx(1.0));
  CHECK(status == LPGINV_SOLVE_CERTIFIED_UNIQUE);

  CHECK(lpginv_solve_bp(a.m, b, 3.0, nullptr, x, nullptr, nullptr) == LPGINV_ERR_DOMAIN);
  lpginv_solver_config config;
  lpginv_solver_config_default(&config);
  config.max_iters = 0;
  CHECK(lpginv_solve_bp(a.m, b, 1.0, &config, x, nullptr, nullptr) ==
        LPGINV_ERR_INVALID_ARGUMENT);
}

TEST_CASE("generalized inverses through the C API") {
  Matrix a;
  REQUIRE(lpginv_matrix_gaussian(10, 30, 1, &a.m) == LPGINV_OK);
  Inverse spinv, mpp, ginv, sub;
  REQUIRE(lpginv_spinv(a.m, nullptr, &spinv.g) == LPGINV_OK);
  REQUIRE(lpginv_mpp(a.m, nullptr, &mpp.g) == LPGINV_OK);
  REQUIRE(lpginv_ginv_p(a.m, 1.5, nullptr, &ginv.g) == LPGINV_OK);
  REQUIRE(lpginv_submatrix_inverse(a.m, 4, nullptr, &sub.g) == LPGINV_OK);
  CHECK(lpginv_geninv_total_support(spinv.g) == 100);
  CHECK(lpginv_geninv_total_support(mpp.g) == 300);
  CHECK(lpginv_geninv_total_support(sub.g) == 100);
  CHECK(lpginv_geninv_frobenius_sq(mpp.g) <= lpginv_geninv_frobenius_sq(ginv.g) + 1e-12);
  CHECK(lpginv_geninv_entrywise_l1(spinv.g) <= lpginv_geninv_entrywise_l1(ginv.g) + 1e-9);
  CHECK(lpginv_geninv_nonunique_risk(spinv.g) == 0);

  Matrix x;
  REQUIRE(lpginv_geninv_matrix(spinv.g, &x.m) == LPGINV_OK);
  CHECK(lpginv_matrix_rows(x.m) == 30);
  CHECK(lpginv_matrix_cols(x.m) == 10);

  for (lpginv_geninv* g : {spinv.g, mpp.g, ginv.g, sub.g}) {
    int passed = 0;
    char* report = nullptr;
    REQUIRE(lpginv_validate(a.m, g, nullptr, &passed, &report) == LPGINV_OK);
    CHECK(passed == 1);
    CHECK(nlohmann::json::parse(Take(report)).is_object());
  }
  char* json = nullptr;
  REQUIRE(lpginv_geninv_to_json(spinv.g, &json) == LPGINV_OK);
  CHECK(nlohmann::json::parse(Take(json)).at("total_support") == 100);

  Matrix tall;
  REQUIRE(lpginv_matrix_gaussian(5, 3, 1, &tall.m) == LPGINV_OK);
  Inverse none;
  CHECK(lpginv_mpp(tall.m, nullptr, &none.g) == LPGINV_ERR_DIMENSION);
  CHECK(none.g == nullptr);
}

TEST_CASE("theory through the C API") {
  lpginv_theory_query q;
  lpginv_theory_query_default(&q);
  q.p = 2.0;
  q.delta = 0.75;
  lpginv_theory_result r;
  REQUIRE(lpginv_alpha_star(&q, &r) == LPGINV_OK);
  CHECK(r.alpha_star == doctest::Approx(2.0));
  CHECK(r.n == 0);
  CHECK(r.monte_carlo == 0);
  char* json = nullptr;
  REQUIRE(lpginv_theory_result_to_json(&r, &json) == LPGINV_OK);
  CHECK(nlohmann::json::parse(Take(json)).at("alpha_star") == doctest::Approx(2.0));

  q.p = 1.5;
  CHECK(lpginv_alpha_star(&q, &r) == LPGINV_ERR_DOMAIN);

  q.p = 1.0;
  q.delta = 0.5;
  q.n = 100;
  q.mc_samples = 2000;
  q.pathwise_slope = 1;
  REQUIRE(lpginv_alpha_star(&q, &r) == LPGINV_OK);
  CHECK(r.monte_carlo == 1);
  CHECK(r.stderr_d > 0.0);
  CHECK(r.alpha_star_sq == doctest::Approx(r.alpha_star * r.alpha_star));
}

TEST_CASE("experiments through the C API") {
  char* summary = nullptr;
  CHECK(lpginv_experiment_run("{not json", &summary) == LPGINV_ERR_PARSE);
  CHECK(lpginv_experiment_run(R"({"name":"fig1"})", &summary) == LPGINV_OK);
  const auto j = nlohmann::json::parse(Take(summary));
  CHECK(j.at("spinv_total_support") == 100);
  CHECK(lpginv_experiment_run(R"({"name":"fig3","p":7})", &summary) ==
        LPGINV_ERR_INVALID_ARGUMENT);
}

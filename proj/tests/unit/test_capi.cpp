// Copyright 2026 The corrmat Authors.
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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "corrmat/corrmat.h"

namespace fs = std::filesystem;

TEST_SUITE("capi") {

TEST_CASE("version and status strings") {
  CHECK(std::string(cm_version()) == "0.1.0");
  CHECK(std::string(cm_status_string(CM_OK)) == "ok");
  CHECK(std::string(cm_status_string(CM_ERR_PARSE)) != "unknown");
  CHECK(std::string(cm_status_string(static_cast<cm_status>(77))) == "unknown");
}

TEST_CASE("profile lifecycle and errors") {
  cm_profile* p = nullptr;
  CHECK(cm_profile_create(CM_PROFILE_POWERLAW_TI, 3.0, 1.0, 0.0, 0.0, NAN, &p) ==
        CM_ERR_PARAMETER);
  CHECK(p == nullptr);
  CHECK(std::string(cm_last_error()).find("c2") != std::string::npos);
  REQUIRE(cm_profile_create(CM_PROFILE_POWERLAW_TI, 3.0, 1.0, 0.0 + 0.5, 0.0, NAN, &p) == CM_OK);
  CHECK(std::string(cm_last_error()).empty());
  double xi = 0.0;
  REQUIRE(cm_profile_eval_xi(p, 0, 0, 1, 0, 16, &xi) == CM_OK);
  CHECK(xi == doctest::Approx(0.25));
  CHECK(cm_profile_eval_xi(p, 0, 0, 1, 0, 16, nullptr) == CM_ERR_PARAMETER);
  cm_profile_destroy(p);
  cm_profile_destroy(nullptr);
}

TEST_CASE("sampling, eigenvalues and matrix files") {
  cm_profile* p = nullptr;
  REQUIRE(cm_profile_create(CM_PROFILE_POWERLAW_TI, 3.0, 1.0, 0.5, 0.0, NAN, &p) == CM_OK);
  cm_ensemble* e = nullptr;
  REQUIRE(cm_ensemble_create(p, 16, &e) == CM_OK);
  cm_matrix* m = nullptr;
  REQUIRE(cm_ensemble_sample(e, 1, 2, &m) == CM_OK);
  CHECK(cm_matrix_dim(m) == 16);
  double a = 0.0, b = 0.0;
  REQUIRE(cm_matrix_get(m, 2, 5, &a) == CM_OK);
  REQUIRE(cm_matrix_get(m, 5, 2, &b) == CM_OK);
  CHECK(a == b);
  CHECK(cm_matrix_get(m, 16, 0, &a) == CM_ERR_DIMENSION);
  std::vector<double> buf(16 * 16), ev(16);
  CHECK(cm_matrix_copy(m, buf.data(), 10) == CM_ERR_SIZE);
  REQUIRE(cm_matrix_copy(m, buf.data(), buf.size()) == CM_OK);
  CHECK(buf[2 * 16 + 5] == a);
  REQUIRE(cm_matrix_eigenvalues(m, ev.data(), ev.size()) == CM_OK);
  CHECK(std::is_sorted(ev.begin(), ev.end()));

  const fs::path path = fs::temp_directory_path() / "corrmat_capi.cmat";
  REQUIRE(cm_matrix_write(m, path.c_str()) == CM_OK);
  cm_matrix* back = nullptr;
  REQUIRE(cm_matrix_read(path.c_str(), &back) == CM_OK);
  double c = 0.0;
  REQUIRE(cm_matrix_get(back, 2, 5, &c) == CM_OK);
  CHECK(c == a);
  CHECK(cm_matrix_read("/nonexistent/x.cmat", &back) == CM_ERR_IO);
  fs::remove(path);

  cm_matrix* g = nullptr;
  REQUIRE(cm_goe_sample(8, 1, 0, &g) == CM_OK);
  CHECK(cm_matrix_dim(g) == 8);
  for (cm_matrix* x : {m, back, g}) cm_matrix_destroy(x);
  cm_ensemble_destroy(e);
  cm_profile_destroy(p);
}

TEST_CASE("dyson solve and density") {
  cm_profile* p = nullptr;
  REQUIRE(cm_profile_create(CM_PROFILE_GOE, 3.0, 1.0, 0.0, 0.0, NAN, &p) == CM_OK);
  double re = 0.0, im = 0.0, res = 1.0;
  REQUIRE(cm_dyson_solve(p, 0.0, 1.0, 1, 1, 1e-12, &re, &im, &res) == CM_OK);
  CHECK(std::abs(re) < 1e-10);
  CHECK(im == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-9));
  CHECK(res <= 1e-12);

  cm_density* d = nullptr;
  REQUIRE(cm_density_compute(p, -3.0, 3.0, 0.01, 1e-4, 1, &d) == CM_OK);
  double el = 0, er = 0, cl = 0, cr = 0;
  REQUIRE(cm_density_edges(d, &el, &er, &cl, &cr) == CM_OK);
  CHECK(std::abs(el + 2.0) < 1e-3);
  CHECK(std::abs(er - 2.0) < 1e-3);
  const size_t n = cm_density_size(d);
  CHECK(n == 601);
  std::vector<double> E(n), rho(n);
  REQUIRE(cm_density_values(d, E.data(), rho.data(), n) == CM_OK);
  CHECK(rho[300] == doctest::Approx(1.0 / M_PI).epsilon(1e-3));
  cm_density_destroy(d);
  cm_profile_destroy(p);
}

TEST_CASE("ks distance") {
  const double a[] = {1, 2, 3}, b[] = {4, 5};
  double d = 0.0;
  REQUIRE(cm_ks_distance(a, 3, b, 2, &d) == CM_OK);
  CHECK(d == 1.0);
  CHECK(cm_ks_distance(a, 0, b, 2, &d) == CM_ERR_INPUT);
}

TEST_CASE("experiment run") {
  const fs::path dir = fs::temp_directory_path() / "corrmat_capi_exp";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "goe.toml");
    cfg << "seed = 1\n[profile]\nkind = \"goe\"\n[run]\nK_u = 1\nE_min = -3\nE_max = 3\n"
           "E_step = 0.01\nz_re = [0.5]\nz_im = [1.0]\n";
  }
  cm_experiment* x = nullptr;
  REQUIRE(cm_experiment_load((dir / "goe.toml").c_str(), &x) == CM_OK);
  CHECK(cm_experiment_set(x, "bogus=1") == CM_ERR_PARSE);
  REQUIRE(cm_experiment_set(x, "run.N=64") == CM_OK);
  REQUIRE(cm_experiment_set_seed(x, 5) == CM_OK);
  REQUIRE(cm_experiment_set_threads(x, 1) == CM_OK);
  REQUIRE(cm_experiment_set_output_dir(x, (dir / "out").c_str()) == CM_OK);
  int code = -1;
  REQUIRE(cm_experiment_run(x, "solve", &code) == CM_OK);
  CHECK(code == 0);
  CHECK(std::string(cm_experiment_summary_json(x)).find("\"passed\": true") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "density.csv"));
  CHECK(fs::exists(dir / "out" / "manifest.json"));

  CHECK(cm_experiment_run(x, "bogus", &code) == CM_ERR_PARAMETER);
  CHECK(code == 1);
  CHECK(std::string(cm_experiment_summary_json(x)).empty());
  cm_experiment_destroy(x);

  CHECK(cm_experiment_load((dir / "missing.toml").c_str(), &x) == CM_ERR_IO);
  fs::remove_all(dir);
}

}  // TEST_SUITE

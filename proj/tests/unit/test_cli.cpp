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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "corrmat_cli_test";

int run(const std::string& args, std::string* err = nullptr) {
  const fs::path log = kRoot / "stderr.txt";
  const std::string cmd =
      std::string(CORRMAT_CLI) + " " + args + " > /dev/null 2> " + log.string();
  const int status = std::system(cmd.c_str());
  if (err) {
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    *err = ss.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
  fs::create_directories(kRoot);
  const fs::path p = kRoot / name;
  std::ofstream(p) << body;
  return p;
}

const char* kGoe =
    "seed = 3\n[profile]\nkind = \"goe\"\n[run]\nN = 256\nK_u = 1\nE_min = -3\nE_max = 3\n"
    "E_step = 0.01\nz_re = [-1.0, 0.5]\nz_im = [1.0, 0.1]\n";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
  fs::create_directories(kRoot);
  CHECK(run("--help") == 0);
  CHECK(run("") == 1);
  CHECK(run("frobnicate --config x.toml") == 1);
  CHECK(run("solve") == 1);
  CHECK(run("solve --config /nonexistent.toml") == 1);
}

TEST_CASE("malformed config exits 1 without artifacts") {
  const fs::path cfg = write_config("malformed.toml", "[profile\nkind = goe\n");
  const fs::path out = kRoot / "malformed_out";
  fs::remove_all(out);
  std::string err;
  CHECK(run("solve --config " + cfg.string() + " --out " + out.string(), &err) == 1);
  CHECK(err.find("line 1") != std::string::npos);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("solve on goe passes and echoes overrides") {
  const fs::path cfg = write_config("goe.toml", kGoe);
  const fs::path out = kRoot / "goe_out";
  fs::remove_all(out);
  REQUIRE(run("solve --config " + cfg.string() + " --set N=128 --out " + out.string()) == 0);
  for (const char* f : {"density.csv", "stieltjes.csv", "summary.json", "manifest.json"})
    CHECK(fs::exists(out / f));
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["parameters"]["run"]["N"] == 128);
  CHECK(manifest["seed"] == 3);
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(summary["passed"] == true);
  CHECK(slurp(out / "density.csv").rfind("E,rho\n", 0) == 0);
}

TEST_CASE("reruns are byte identical across thread counts") {
  const fs::path cfg = write_config("goe_det.toml", kGoe);
  const fs::path a = kRoot / "det_a", b = kRoot / "det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  const std::string common = " --config " + cfg.string() + " --set n_trials=3 --set N=64";
  REQUIRE(run("residual" + common + " --threads 1 --out " + a.string()) == 0);
  REQUIRE(run("residual" + common + " --threads 4 --out " + b.string()) == 0);
  CHECK(slurp(a / "residual.csv") == slurp(b / "residual.csv"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
}

TEST_CASE("output directory needs an existing parent") {
  const fs::path cfg = write_config("goe_dir.toml", kGoe);
  CHECK(run("solve --config " + cfg.string() + " --out " + (kRoot / "no" / "such").string()) == 1);
  CHECK_FALSE(fs::exists(kRoot / "no"));
}

TEST_CASE("domain violations name the inequality") {
  const fs::path cfg = write_config(
      "domain.toml",
      std::string(kGoe) + "enforce_domain = true\nn_trials = 1\n");
  std::string err;
  const fs::path out = kRoot / "domain_out";
  fs::remove_all(out);
  CHECK(run("locallaw --config " + cfg.string() + " --set N=64 --out " + out.string(), &err) == 1);
  CHECK(err.find("Im z >=") != std::string::npos);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("failed checks exit 2") {
  const fs::path cfg = write_config("strict.toml", std::string(kGoe) + "local_law_constant = 1e-9\n"
                                                   "n_trials = 2\n");
  const fs::path out = kRoot / "strict_out";
  fs::remove_all(out);
  CHECK(run("locallaw --config " + cfg.string() + " --set N=32 --out " + out.string()) == 2);
  CHECK(fs::exists(out / "locallaw.csv"));
}

}  // TEST_SUITE

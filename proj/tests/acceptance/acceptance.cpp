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

// Acceptance harness. Prints one PASS/FAIL line per criterion; with
// --criterion N only that criterion runs and the exit status reflects it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corrmat/config.hpp"
#include "corrmat/pipeline.hpp"
#include "corrmat/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace corrmat;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

fs::path g_out;
json g_baseline;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

ExperimentConfig load(const std::string& name, const std::vector<std::string>& overrides,
                      const std::string& tag) {
  ExperimentConfig c = ExperimentConfig::load(std::string(CORRMAT_SOURCE_DIR) + "/configs/" + name);
  for (const auto& o : overrides) c.apply_override(o);
  c.output.dir = (g_out / tag).string();
  return c;
}

// Runs a subcommand and returns its parsed summary; throws on exit code 1.
json run(const std::string& sub, const ExperimentConfig& c) {
  fs::create_directories(g_out);
  const RunOutcome r = run_experiment(sub, c);
  if (r.exit_code == kExitError) throw std::runtime_error(r.error);
  return json::parse(r.summary_json);
}

const json& check(const json& summary, const std::string& name) {
  for (const auto& c : summary["checks"])
    if (c["name"] == name) return c;
  throw std::runtime_error("summary has no check '" + name + "'");
}

std::string describe(const json& c) {
  std::ostringstream os;
  os << c["name"].get<std::string>() << "=";
  if (c["value"].is_null()) os << "null";
  else os << fmt(c["value"].get<double>());
  os << " (" << c["relation"].get<std::string>() << " ";
  if (c["threshold"].is_null()) os << "null";
  else os << fmt(c["threshold"].get<double>());
  os << ")";
  return os.str();
}

Outcome from_checks(const json& summary, const std::vector<std::string>& names) {
  Outcome o{true, ""};
  for (const auto& n : names) {
    const json& c = check(summary, n);
    o.passed = o.passed && c["passed"].get<bool>();
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += describe(c);
  }
  return o;
}

Outcome check_semicircle_oracle() {
  const json s = run("solve", load("goe.toml", {}, "c1_semicircle"));
  return from_checks(s, {"semicircle_stieltjes", "left_edge", "right_edge", "left_edge_constant",
                         "right_edge_constant", "density_mass"});
}

Outcome check_sampler_covariance() {
  const json s =
      run("sample", load("powerlaw_d3.toml", {"N=32", "n_trials=100000"}, "c2_covariance"));
  return from_checks(s, {"covariance_audit"});
}

Outcome check_local_law() {
  const double constant = g_baseline.at("local_law_constant").get<double>();
  const json s = run("locallaw", load("powerlaw_d3.toml",
                                      {"N_list=[128, 256, 512]", "n_trials=20", "eta_exponent=0.4",
                                       "f_N_list=[]", "enforce_domain=false",
                                       "local_law_constant=" + fmt(constant)},
                                      "c3_locallaw"));
  Outcome o = from_checks(s, {"median_lambda_exponent", "bound_ratio"});
  o.detail += "; median Lambda";
  for (const auto& e : s["results"]["locallaw"]["per_N"])
    o.detail += " N=" + std::to_string(e["N"].get<int>()) + ":" + fmt(e["median_lambda"].get<double>());
  return o;
}

Outcome check_residual_bound() {
  // 50 trials at each of the four (N, z) pairs: 200 trials in total.
  const json s = run("residual", load("powerlaw_d3.toml",
                                      {"N_list=[64, 256]", "z_re=[0.0]", "z_im=[1.0, 0.5]",
                                       "n_trials=50"},
                                      "c4_residual"));
  Outcome o = from_checks(s, {"residual_bound"});
  o.detail += "; trials=" + std::to_string(s["results"]["residual"]["trials"].get<int>()) +
              " max r/bound=" + fmt(s["results"]["residual"]["max_ratio"].get<double>());
  return o;
}

Outcome check_f_iteration_scaling() {
  const ExperimentConfig c = load("powerlaw_d3.toml", {}, "c5_fscaling");
  DysonOptions opts;
  opts.tol = c.run.tol;
  const FIterationScaling scaling =
      f_iteration_scaling(c.make_profile(), Complex(0.0, 1.0), {64, 128, 256, 512}, opts);
  const auto in_window = [](double p) { return p >= -0.65 && p <= -0.35; };
  Outcome o;
  o.passed = in_window(scaling.single.exponent) && in_window(scaling.double_iterate.exponent);
  o.detail = "p_single=" + fmt(scaling.single.exponent) + " p_double=" + fmt(scaling.double_iterate.exponent) +
             " (window [-0.65, -0.35]); |F(D(g))-D(g)|_op:";
  for (const auto& r : scaling.reports) o.detail += " " + fmt(r.f_error);
  return o;
}

Outcome check_jaffard_inverse_decay() {
  const json s = run("jaffard", load("powerlaw_d3.toml",
                                     {"jaffard_instances=20", "jaffard_N=128", "jaffard_decay=3",
                                      "jaffard_op_norm=0.5"},
                                     "c6_jaffard"));
  return from_checks(s, {"inverse_decay_exponent", "inverse_decay_fit_r2"});
}

Outcome check_product_decay() {
  const json s = run("jaffard", load("powerlaw_d3.toml",
                                     {"product_pairs=50", "product_N=64", "product_beta=2.5"},
                                     "c7_products"));
  Outcome o = from_checks(s, {"product_decay"});
  o.detail += "; max lhs/rhs=" + fmt(s["results"]["jaffard"]["product_max_ratio"].get<double>());
  return o;
}

Outcome check_edge_location() {
  const json s = run("edge", load("powerlaw_d3.toml", {"N_list=[128, 256, 512]", "n_trials=100"},
                                  "c8_edge"));
  return from_checks(s, {"excess_slope", "excess_largest_N"});
}

Outcome check_edge_universality() {
  const json s = run("universality",
                     load("powerlaw_d3.toml", {"N=256", "n_trials=2000", "k=1"}, "c9_universality"));
  Outcome o = from_checks(s, {"ks_distance", "null_calibration"});
  o.detail += "; null critical=" + fmt(s["results"]["universality"]["null_critical"].get<double>());
  return o;
}

std::map<std::string, std::string> csv_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return out;
}

Outcome check_determinism() {
  struct Case {
    std::string sub, config;
    std::vector<std::string> overrides;
  };
  const std::vector<Case> cases{
      {"solve", "goe.toml", {}},
      {"sample", "powerlaw_d3.toml", {"N=32", "n_trials=3000"}},
      {"locallaw", "powerlaw_d3.toml", {"N_list=[64, 128]", "n_trials=4", "f_N_list=[32, 64]"}},
      {"residual", "powerlaw_d3.toml", {"N_list=[64]", "n_trials=8"}},
      {"jaffard", "powerlaw_d3.toml", {"jaffard_N=64", "product_pairs=10"}},
      {"edge", "powerlaw_d3.toml", {"N_list=[64, 128]", "n_trials=10"}},
      {"universality", "powerlaw_d3.toml",
       {"N=64", "n_trials=200", "null_pool=400", "null_audits=2"}},
  };
  Outcome o{true, ""};
  int files = 0;
  for (const auto& c : cases) {
    std::map<std::string, std::string> ref;
    for (int threads : {1, 8}) {
      const std::string tag = "c10_" + c.sub + "_t" + std::to_string(threads);
      ExperimentConfig cfg = load(c.config, c.overrides, tag);
      cfg.threads = threads;
      fs::remove_all(cfg.output.dir);
      run(c.sub, cfg);
      const auto got = csv_files(cfg.output.dir);
      if (threads == 1) {
        ref = got;
        continue;
      }
      if (got != ref) {
        o.passed = false;
        o.detail += c.sub + " differs; ";
      }
      files += static_cast<int>(got.size());
    }
  }
  o.detail += std::to_string(files) + " CSV files compared at 1 and 8 threads";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrmat acceptance criteria"};
  int only = 0;
  std::string out = "acceptance_out";
  std::string baseline = CORRMAT_BASELINE;
  app.add_option("--criterion", only, "run a single criterion (1-10)");
  app.add_option("--out", out, "artifact directory");
  app.add_option("--baseline", baseline, "frozen calibration constants");
  CLI11_PARSE(app, argc, argv);
  g_out = out;
  {
    std::ifstream in(baseline);
    if (!in) {
      std::cerr << "cannot read baseline " << baseline << "\n";
      return 1;
    }
    g_baseline = json::parse(in);
  }

  const std::vector<Criterion> criteria{
      {1, "semicircle_oracle", 10, check_semicircle_oracle},
      {2, "sampler_covariance", 120, check_sampler_covariance},
      {3, "local_law", 1200, check_local_law},
      {4, "residual_bound", 300, check_residual_bound},
      {5, "f_iteration_scaling", 120, check_f_iteration_scaling},
      {6, "jaffard_inverse_decay", 60, check_jaffard_inverse_decay},
      {7, "product_decay", 30, check_product_decay},
      {8, "edge_location", 900, check_edge_location},
      {9, "edge_universality", 1800, check_edge_universality},
      {10, "determinism", 1800, check_determinism},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool ok = o.passed && in_time;
    all = all && ok;
    std::cout << (ok ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " [" << fmt(secs)
              << " s, limit " << fmt(c.limit_seconds) << " s" << (in_time ? "" : ", too slow")
              << "] " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}

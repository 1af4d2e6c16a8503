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

// Command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrmat/corrmat.h"

namespace {

constexpr int kExitError = 1;

int report(cm_status status) {
  std::cerr << "corrmat: " << cm_last_error() << "\n";
  return status == CM_OK ? 0 : kExitError;
}

int parse_threads(const std::string& text, int* out) {
  if (text == "auto") {
    *out = 0;
    return 0;
  }
  try {
    size_t pos = 0;
    const int t = std::stoi(text, &pos);
    if (pos != text.size() || t < 1) return kExitError;
    *out = t;
    return 0;
  } catch (const std::exception&) {
    return kExitError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrmat: correlated random matrix experiments"};
  app.set_version_flag("--version", std::string(cm_version()));
  app.require_subcommand(1, 1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  std::string threads;
  std::string out_dir;
  bool quiet = false;

  const char* names[] = {"sample", "solve",    "locallaw",     "residual",
                         "jaffard", "edge",    "universality", "all"};
  const char* help[] = {"sample matrices and audit the entry covariance",
                        "solve the Dyson equation, density and edges",
                        "entrywise local law against the deterministic equivalent",
                        "self-consistent residual bound",
                        "inverse and product decay of decay-class matrices",
                        "extreme eigenvalue location against the density edges",
                        "edge gap statistics against the GOE reference",
                        "every stage above in one run"};
  for (size_t i = 0; i < std::size(names); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config_path, "TOML or JSON experiment file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "override key=value (repeatable)");
    sub->add_option("--seed", seed, "master seed (overrides the file)");
    sub->add_option("--threads", threads, "worker threads or 'auto'");
    sub->add_option("--out", out_dir, "output directory (overrides the file)");
    sub->add_flag("-q,--quiet", quiet, "do not print the summary");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();
  const CLI::App* sub = app.get_subcommands().front();

  cm_experiment* exp = nullptr;
  if (cm_experiment_load(config_path.c_str(), &exp) != CM_OK) return report(CM_ERR_PARSE);
  int code = 0;
  auto fail_with = [&](cm_status s) {
    code = report(s);
    cm_experiment_destroy(exp);
    return code;
  };
  for (const auto& o : overrides)
    if (cm_status s = cm_experiment_set(exp, o.c_str()); s != CM_OK) return fail_with(s);
  if (sub->count("--seed") > 0)
    if (cm_status s = cm_experiment_set_seed(exp, seed); s != CM_OK) return fail_with(s);
  if (!threads.empty()) {
    int t = 0;
    if (parse_threads(threads, &t) != 0) {
      std::cerr << "corrmat: --threads must be a positive integer or 'auto'\n";
      cm_experiment_destroy(exp);
      return kExitError;
    }
    if (cm_status s = cm_experiment_set_threads(exp, t); s != CM_OK) return fail_with(s);
  }
  if (!out_dir.empty())
    if (cm_status s = cm_experiment_set_output_dir(exp, out_dir.c_str()); s != CM_OK)
      return fail_with(s);

  int exit_code = kExitError;
  const cm_status s = cm_experiment_run(exp, subcommand.c_str(), &exit_code);
  if (s != CM_OK) return fail_with(s);
  if (!quiet) std::cout << cm_experiment_summary_json(exp);
  if (exit_code == 2) std::cerr << "corrmat: one or more checks failed\n";
  cm_experiment_destroy(exp);
  return exit_code;
}

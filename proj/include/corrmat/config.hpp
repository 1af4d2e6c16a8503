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

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "corrmat/common.hpp"
#include "corrmat/model.hpp"

namespace corrmat {

// Values of the experiment file format: a small TOML subset with tables,
// scalars (integer, float, bool, string) and flat arrays.
struct ConfigValue {
  using Array = std::vector<ConfigValue>;
  std::variant<std::int64_t, double, bool, std::string, Array> data;
  int line = 0;
  int column = 0;

  bool is_number() const;
  double as_double(std::string_view key) const;
  std::int64_t as_int(std::string_view key) const;
  bool as_bool(std::string_view key) const;
  const std::string& as_string(std::string_view key) const;
  const Array& as_array(std::string_view key) const;
};

// "section.key" -> value; top-level keys have no section prefix.
using ConfigTable = std::map<std::string, ConfigValue>;

// Throws kParse with "line L, column C" on malformed input.
ConfigTable parse_toml(std::string_view text);
// Value syntax shared by the file format and --set overrides; bare words
// are read as strings in override mode.
ConfigValue parse_value(std::string_view text, bool lenient = false);
ConfigTable parse_json_config(std::string_view text);

struct ProfileConfig {
  std::string kind = "goe";
  double d = 3.0;
  double c1 = 1.0;
  double c2 = 0.0;
  double eps_mod = 0.0;
  double alpha = std::numeric_limits<double>::quiet_NaN();
};

struct RunConfig {
  int N = 256;
  std::vector<int> N_list;
  int n_trials = 20;
  int k = 1;
  std::vector<double> z_re{0.0};
  std::vector<double> z_im{1.0};
  // [lo, hi, step]; when given it replaces z_re.
  std::vector<double> z_re_range;
  // When set, locallaw uses the single bulk point E_mid + i N^-eta_exponent.
  double eta_exponent = std::numeric_limits<double>::quiet_NaN();
  double tol = 1e-10;
  int K_s = 0;
  int K_u = 64;
  double eta_recover = 1e-4;
  double E_min = -4.0;
  double E_max = 4.0;
  double E_step = 0.01;
  bool enforce_domain = false;
  double domain_log_power = 10.0;
  double local_law_constant = 1.0;
  std::vector<int> f_N_list;
  std::string edge_side = "left";
  double edge_slope_max = -0.3;
  double ks_threshold = 0.06;
  int null_pool = 8000;
  int null_audits = 20;
  double null_pass_fraction = 0.95;
  int jaffard_instances = 20;
  int jaffard_N = 128;
  double jaffard_decay = 3.0;
  double jaffard_op_norm = 0.5;
  int product_pairs = 50;
  int product_N = 64;
  double product_beta = 2.5;
  bool write_matrices = false;
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<std::string> formats{"csv", "json"};
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = auto
  ProfileConfig profile;
  RunConfig run;
  OutputConfig output;

  // Reads TOML or, for a .json path, JSON. Unknown keys are rejected.
  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig from_table(const ConfigTable& table);

  // "section.key=value" or a bare "key=value" naming a unique key.
  void apply_override(std::string_view assignment);
  void validate() const;

  CorrelationProfile make_profile() const;
  bool wants_csv() const;
  bool wants_json() const;
  std::vector<int> N_values() const;
  // Cartesian product of the real parts and z_im.
  std::vector<Complex> z_grid() const;

  // Canonical JSON (stable key order) used for the manifest and the hash.
  std::string to_json() const;
  std::string hash() const;
};

}  // namespace corrmat

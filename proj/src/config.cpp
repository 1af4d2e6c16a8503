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

#include "corrmat/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace corrmat {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void parse_error(int line, int column, const std::string& what) {
  fail(ErrorCode::kParse,
       "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

const char* type_name(const ConfigValue& v) {
  switch (v.data.index()) {
    case 0: return "integer";
    case 1: return "float";
    case 2: return "boolean";
    case 3: return "string";
    default: return "array";
  }
}

[[noreturn]] void type_error(const ConfigValue& v, std::string_view key, const char* want) {
  std::string where = v.line > 0 ? "line " + std::to_string(v.line) + ", column " +
                                       std::to_string(v.column) + ": "
                                 : std::string();
  fail(ErrorCode::kParse, where + "'" + std::string(key) + "' must be " + want + ", got " +
                              type_name(v));
}

class TomlReader {
 public:
  explicit TomlReader(std::string_view text) : text_(text) {}

  ConfigTable read() {
    ConfigTable table;
    std::string section;
    while (!at_end()) {
      skip_blank();
      if (at_end()) break;
      const char c = peek();
      if (c == '\n') {
        advance();
        continue;
      }
      if (c == '#') {
        skip_comment();
        continue;
      }
      if (c == '[') {
        advance();
        skip_blank();
        const int l = line_, col = col_;
        section = bare_key();
        if (section.empty()) parse_error(l, col, "expected a table name");
        skip_blank();
        expect(']');
        end_of_line();
        continue;
      }
      const int l = line_, col = col_;
      const std::string key = bare_key();
      if (key.empty()) parse_error(l, col, std::string("unexpected character '") + c + "'");
      skip_blank();
      expect('=');
      skip_blank();
      ConfigValue v = value();
      const std::string full = section.empty() ? key : section + "." + key;
      if (table.count(full) != 0) parse_error(l, col, "duplicate key '" + full + "'");
      v.line = l;
      v.column = col;
      table.emplace(full, std::move(v));
      end_of_line();
    }
    return table;
  }

  ConfigValue value() {
    const int l = line_, col = col_;
    if (at_end()) parse_error(l, col, "expected a value");
    const char c = peek();
    ConfigValue v;
    v.line = l;
    v.column = col;
    if (c == '"') {
      v.data = string_literal();
    } else if (c == '[') {
      advance();
      ConfigValue::Array arr;
      for (;;) {
        skip_space_and_comments();
        if (at_end()) parse_error(l, col, "unterminated array");
        if (peek() == ']') {
          advance();
          break;
        }
        arr.push_back(value());
        skip_space_and_comments();
        if (!at_end() && peek() == ',') {
          advance();
          continue;
        }
        skip_space_and_comments();
        if (at_end() || peek() != ']') parse_error(line_, col_, "expected ',' or ']' in array");
      }
      v.data = std::move(arr);
    } else {
      std::string word;
      while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' &&
             peek() != ']' && peek() != '#')
        word.push_back(advance());
      v.data = scalar(word, l, col);
    }
    return v;
  }

  bool at_end() const { return pos_ >= text_.size(); }
  void skip_blank() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
  int line() const { return line_; }
  int column() const { return col_; }

 private:
  char peek() const { return text_[pos_]; }
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_comment() {
    while (!at_end() && peek() != '\n') advance();
  }
  void skip_space_and_comments() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (!at_end() && peek() == '#') {
        skip_comment();
        continue;
      }
      return;
    }
  }
  void expect(char c) {
    if (at_end() || peek() != c) parse_error(line_, col_, std::string("expected '") + c + "'");
    advance();
  }
  void end_of_line() {
    skip_blank();
    if (at_end()) return;
    if (peek() == '#') {
      skip_comment();
      return;
    }
    if (peek() != '\n') parse_error(line_, col_, "unexpected text after value");
    advance();
  }
  std::string bare_key() {
    std::string key;
    while (!at_end()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') {
        key.push_back(advance());
      } else {
        break;
      }
    }
    return key;
  }
  std::string string_literal() {
    const int l = line_, col = col_;
    advance();
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n') parse_error(l, col, "unterminated string");
      const char c = advance();
      if (c == '"') break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (at_end()) parse_error(l, col, "unterminated string");
      const char e = advance();
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        default: parse_error(line_, col_ - 1, std::string("unknown escape '\\") + e + "'");
      }
    }
    return out;
  }

 public:
  static std::variant<std::int64_t, double, bool, std::string, ConfigValue::Array> scalar(
      const std::string& word, int l, int col) {
    if (word == "true") return true;
    if (word == "false") return false;
    if (word == "inf" || word == "+inf") return std::numeric_limits<double>::infinity();
    if (word == "-inf") return -std::numeric_limits<double>::infinity();
    if (word == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (word.empty()) parse_error(l, col, "expected a value");
    const char* first = word.data();
    const char* last = word.data() + word.size();
    if (*first == '+') ++first;
    const bool floating = word.find_first_of(".eE") != std::string::npos;
    if (!floating) {
      std::int64_t i = 0;
      const auto r = std::from_chars(first, last, i);
      if (r.ec == std::errc() && r.ptr == last) return i;
    } else {
      double d = 0.0;
      const auto r = std::from_chars(first, last, d);
      if (r.ec == std::errc() && r.ptr == last) return d;
    }
    parse_error(l, col, "invalid value '" + word + "'");
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

ConfigValue from_json(const nlohmann::json& j, const std::string& key) {
  ConfigValue v;
  if (j.is_boolean()) {
    v.data = j.get<bool>();
  } else if (j.is_number_integer()) {
    v.data = j.get<std::int64_t>();
  } else if (j.is_number()) {
    v.data = j.get<double>();
  } else if (j.is_string()) {
    v.data = j.get<std::string>();
  } else if (j.is_array()) {
    ConfigValue::Array arr;
    for (const auto& e : j) arr.push_back(from_json(e, key));
    v.data = std::move(arr);
  } else {
    fail(ErrorCode::kParse, "'" + key + "' has an unsupported JSON type");
  }
  return v;
}

int to_int(const ConfigValue& v, std::string_view key) {
  const std::int64_t i = v.as_int(key);
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
    type_error(v, key, "a 32-bit integer");
  return static_cast<int>(i);
}

std::vector<int> int_list(const ConfigValue& v, std::string_view key) {
  if (!std::holds_alternative<ConfigValue::Array>(v.data)) return {to_int(v, key)};
  std::vector<int> out;
  for (const auto& e : v.as_array(key)) out.push_back(to_int(e, key));
  return out;
}

std::vector<double> double_list(const ConfigValue& v, std::string_view key) {
  if (!std::holds_alternative<ConfigValue::Array>(v.data)) return {v.as_double(key)};
  std::vector<double> out;
  for (const auto& e : v.as_array(key)) out.push_back(e.as_double(key));
  return out;
}

std::vector<std::string> string_list(const ConfigValue& v, std::string_view key) {
  if (!std::holds_alternative<ConfigValue::Array>(v.data)) return {v.as_string(key)};
  std::vector<std::string> out;
  for (const auto& e : v.as_array(key)) out.push_back(e.as_string(key));
  return out;
}

ordered_json number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(); }

struct Field {
  const char* section;  // "" for top level
  const char* key;
  std::function<void(ExperimentConfig&, const ConfigValue&, const std::string&)> set;
  std::function<ordered_json(const ExperimentConfig&)> get;
};

#define CM_DOUBLE(sec, member, name)                                                     \
  Field {                                                                                \
    #sec, name, [](ExperimentConfig& c, const ConfigValue& v,                            \
                   const std::string& k) { c.sec.member = v.as_double(k); },             \
        [](const ExperimentConfig& c) { return number(c.sec.member); }                   \
  }
#define CM_INT(sec, member, name)                                                        \
  Field {                                                                                \
    #sec, name, [](ExperimentConfig& c, const ConfigValue& v,                            \
                   const std::string& k) { c.sec.member = to_int(v, k); },               \
        [](const ExperimentConfig& c) { return ordered_json(c.sec.member); }             \
  }
#define CM_BOOL(sec, member, name)                                                       \
  Field {                                                                                \
    #sec, name, [](ExperimentConfig& c, const ConfigValue& v,                            \
                   const std::string& k) { c.sec.member = v.as_bool(k); },               \
        [](const ExperimentConfig& c) { return ordered_json(c.sec.member); }             \
  }
#define CM_STRING(sec, member, name)                                                     \
  Field {                                                                                \
    #sec, name, [](ExperimentConfig& c, const ConfigValue& v,                            \
                   const std::string& k) { c.sec.member = v.as_string(k); },             \
        [](const ExperimentConfig& c) { return ordered_json(c.sec.member); }             \
  }
#define CM_LIST(sec, member, name, conv)                                                 \
  Field {                                                                                \
    #sec, name, [](ExperimentConfig& c, const ConfigValue& v,                            \
                   const std::string& k) { c.sec.member = conv(v, k); },                 \
        [](const ExperimentConfig& c) { return ordered_json(c.sec.member); }             \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      Field{"", "seed",
            [](ExperimentConfig& c, const ConfigValue& v, const std::string& k) {
              const std::int64_t s = v.as_int(k);
              if (s < 0) type_error(v, k, "a nonnegative integer");
              c.seed = static_cast<std::uint64_t>(s);
            },
            [](const ExperimentConfig& c) { return ordered_json(c.seed); }},
      Field{"", "threads",
            [](ExperimentConfig& c, const ConfigValue& v, const std::string& k) {
              if (std::holds_alternative<std::string>(v.data)) {
                if (v.as_string(k) != "auto") type_error(v, k, "an integer or \"auto\"");
                c.threads = 0;
              } else {
                c.threads = to_int(v, k);
              }
            },
            [](const ExperimentConfig& c) {
              return c.threads == 0 ? ordered_json("auto") : ordered_json(c.threads);
            }},
      CM_STRING(profile, kind, "kind"),
      CM_DOUBLE(profile, d, "d"),
      CM_DOUBLE(profile, c1, "c1"),
      CM_DOUBLE(profile, c2, "c2"),
      CM_DOUBLE(profile, eps_mod, "eps_mod"),
      CM_DOUBLE(profile, alpha, "alpha"),
      CM_INT(run, N, "N"),
      CM_LIST(run, N_list, "N_list", int_list),
      CM_INT(run, n_trials, "n_trials"),
      CM_INT(run, k, "k"),
      CM_LIST(run, z_re, "z_re", double_list),
      CM_LIST(run, z_im, "z_im", double_list),
      CM_LIST(run, z_re_range, "z_re_range", double_list),
      CM_DOUBLE(run, eta_exponent, "eta_exponent"),
      CM_DOUBLE(run, tol, "tol"),
      CM_INT(run, K_s, "K_s"),
      CM_INT(run, K_u, "K_u"),
      CM_DOUBLE(run, eta_recover, "eta_recover"),
      CM_DOUBLE(run, E_min, "E_min"),
      CM_DOUBLE(run, E_max, "E_max"),
      CM_DOUBLE(run, E_step, "E_step"),
      CM_BOOL(run, enforce_domain, "enforce_domain"),
      CM_DOUBLE(run, domain_log_power, "domain_log_power"),
      CM_DOUBLE(run, local_law_constant, "local_law_constant"),
      CM_LIST(run, f_N_list, "f_N_list", int_list),
      CM_STRING(run, edge_side, "edge_side"),
      CM_DOUBLE(run, edge_slope_max, "edge_slope_max"),
      CM_DOUBLE(run, ks_threshold, "ks_threshold"),
      CM_INT(run, null_pool, "null_pool"),
      CM_INT(run, null_audits, "null_audits"),
      CM_DOUBLE(run, null_pass_fraction, "null_pass_fraction"),
      CM_INT(run, jaffard_instances, "jaffard_instances"),
      CM_INT(run, jaffard_N, "jaffard_N"),
      CM_DOUBLE(run, jaffard_decay, "jaffard_decay"),
      CM_DOUBLE(run, jaffard_op_norm, "jaffard_op_norm"),
      CM_INT(run, product_pairs, "product_pairs"),
      CM_INT(run, product_N, "product_N"),
      CM_DOUBLE(run, product_beta, "product_beta"),
      CM_BOOL(run, write_matrices, "write_matrices"),
      CM_STRING(output, dir, "dir"),
      CM_LIST(output, formats, "formats", string_list),
  };
  return table;
}

#undef CM_DOUBLE
#undef CM_INT
#undef CM_BOOL
#undef CM_STRING
#undef CM_LIST

std::string full_name(const Field& f) {
  return f.section[0] == '\0' ? std::string(f.key) : std::string(f.section) + "." + f.key;
}

const Field* find_field(const std::string& name) {
  for (const auto& f : fields())
    if (full_name(f) == name) return &f;
  return nullptr;
}

}  // namespace

bool ConfigValue::is_number() const {
  return std::holds_alternative<std::int64_t>(data) || std::holds_alternative<double>(data);
}

double ConfigValue::as_double(std::string_view key) const {
  if (const auto* i = std::get_if<std::int64_t>(&data)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&data)) return *d;
  type_error(*this, key, "a number");
}

std::int64_t ConfigValue::as_int(std::string_view key) const {
  if (const auto* i = std::get_if<std::int64_t>(&data)) return *i;
  if (const auto* d = std::get_if<double>(&data)) {
    if (std::isfinite(*d) && *d == std::floor(*d) && std::abs(*d) < 9e15)
      return static_cast<std::int64_t>(*d);
  }
  type_error(*this, key, "an integer");
}

bool ConfigValue::as_bool(std::string_view key) const {
  if (const auto* b = std::get_if<bool>(&data)) return *b;
  type_error(*this, key, "a boolean");
}

const std::string& ConfigValue::as_string(std::string_view key) const {
  if (const auto* s = std::get_if<std::string>(&data)) return *s;
  type_error(*this, key, "a string");
}

const ConfigValue::Array& ConfigValue::as_array(std::string_view key) const {
  if (const auto* a = std::get_if<Array>(&data)) return *a;
  type_error(*this, key, "an array");
}

ConfigTable parse_toml(std::string_view text) { return TomlReader(text).read(); }

ConfigValue parse_value(std::string_view text, bool lenient) {
  TomlReader reader(text);
  try {
    reader.skip_blank();
    ConfigValue v = reader.value();
    reader.skip_blank();
    if (!reader.at_end()) parse_error(reader.line(), reader.column(), "unexpected trailing text");
    return v;
  } catch (const Error&) {
    if (!lenient) throw;
    const bool bare = !text.empty() && text.find_first_of("\"[]#,= \t\n") == std::string::npos;
    if (!bare) throw;
    ConfigValue v;
    v.data = std::string(text);
    return v;
  }
}

ConfigTable parse_json_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kParse, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::kParse, "JSON config must be an object");
  ConfigTable table;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) {
      for (const auto& [sub, v] : value.items())
        table.emplace(key + "." + sub, from_json(v, key + "." + sub));
    } else {
      table.emplace(key, from_json(value, key));
    }
  }
  return table;
}

ExperimentConfig ExperimentConfig::from_table(const ConfigTable& table) {
  ExperimentConfig cfg;
  for (const auto& [name, value] : table) {
    const Field* f = find_field(name);
    if (f == nullptr) {
      std::string where = value.line > 0 ? "line " + std::to_string(value.line) + ", column " +
                                               std::to_string(value.column) + ": "
                                         : std::string();
      fail(ErrorCode::kParse, where + "unknown key '" + name + "'");
    }
    f->set(cfg, value, name);
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  try {
    return from_table(json ? parse_json_config(text) : parse_toml(text));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse) throw;
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

void ExperimentConfig::apply_override(std::string_view assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    fail(ErrorCode::kParse, "override '" + std::string(assignment) + "' is not key=value");
  std::string key(assignment.substr(0, eq));
  while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
  std::string_view rhs = assignment.substr(eq + 1);
  while (!rhs.empty() && std::isspace(static_cast<unsigned char>(rhs.front()))) rhs.remove_prefix(1);

  const Field* f = find_field(key);
  if (f == nullptr && key.find('.') == std::string::npos) {
    for (const auto& cand : fields()) {
      if (key != cand.key) continue;
      if (f != nullptr) fail(ErrorCode::kParse, "override key '" + key + "' is ambiguous");
      f = &cand;
    }
  }
  if (f == nullptr) fail(ErrorCode::kParse, "unknown override key '" + key + "'");
  f->set(*this, parse_value(rhs, /*lenient=*/true), full_name(*f));
}

void ExperimentConfig::validate() const {
  (void)make_profile();
  auto check = [](bool ok, const std::string& what) { require(ok, ErrorCode::kParameter, what); };
  check(threads >= 0, "threads must be >= 1 or \"auto\"");
  check(run.N >= 2, "run.N must be >= 2");
  for (int n : run.N_list) check(n >= 2, "run.N_list entries must be >= 2");
  for (int n : run.f_N_list) check(n >= 2, "run.f_N_list entries must be >= 2");
  check(run.n_trials >= 1, "run.n_trials must be >= 1");
  check(run.k >= 1 && run.k <= 6, "run.k must lie in [1, 6]");
  check(!run.z_re.empty() && !run.z_im.empty(), "run.z_re and run.z_im must be nonempty");
  for (double y : run.z_im) check(y > 0.0 && std::isfinite(y), "run.z_im entries must be > 0");
  for (double x : run.z_re) check(std::isfinite(x), "run.z_re entries must be finite");
  check(run.z_re_range.empty() ||
            (run.z_re_range.size() == 3 && run.z_re_range[1] > run.z_re_range[0] &&
             run.z_re_range[2] > 0.0 &&
             (run.z_re_range[1] - run.z_re_range[0]) / run.z_re_range[2] <= 1e5),
        "run.z_re_range must be [lo, hi, step] with lo < hi and step > 0");
  check(std::isnan(run.eta_exponent) || (run.eta_exponent > 0.0 && run.eta_exponent < 1.0),
        "run.eta_exponent must lie in (0, 1)");
  check(run.tol >= 1e-12 && run.tol < 1.0, "run.tol must lie in [1e-12, 1)");
  check(run.K_s >= 0, "run.K_s must be >= 0");
  check(run.K_u >= 1, "run.K_u must be >= 1");
  check(run.eta_recover >= 1e-5 && run.eta_recover <= 1e-2,
        "run.eta_recover must lie in [1e-5, 1e-2]");
  check(run.E_max > run.E_min && run.E_step > 0.0 &&
            (run.E_max - run.E_min) / run.E_step <= 1e6,
        "run.E_min < run.E_max with a positive E_step is required");
  check(run.local_law_constant > 0.0, "run.local_law_constant must be > 0");
  check(run.edge_side == "left" || run.edge_side == "right", "run.edge_side must be left or right");
  check(run.ks_threshold > 0.0 && run.ks_threshold <= 1.0, "run.ks_threshold must lie in (0, 1]");
  check(run.null_pool >= 2, "run.null_pool must be >= 2");
  check(run.null_audits >= 1, "run.null_audits must be >= 1");
  check(run.null_pass_fraction > 0.0 && run.null_pass_fraction <= 1.0,
        "run.null_pass_fraction must lie in (0, 1]");
  check(run.jaffard_instances >= 1 && run.jaffard_N >= 32, "jaffard settings out of range");
  check(run.jaffard_op_norm > 0.0 && run.jaffard_op_norm < 1.0,
        "run.jaffard_op_norm must lie in (0, 1)");
  check(run.jaffard_decay > 1.0, "run.jaffard_decay must be > 1");
  check(run.product_pairs >= 1 && run.product_N >= 2, "product-decay settings out of range");
  check(run.product_beta > 1.0, "run.product_beta must be > 1");
  check(!output.dir.empty(), "output.dir must be nonempty");
  for (const auto& f : output.formats)
    check(f == "csv" || f == "json", "output.formats entries must be \"csv\" or \"json\"");
}

CorrelationProfile ExperimentConfig::make_profile() const {
  return CorrelationProfile::create(parse_profile_kind(profile.kind), profile.d, profile.c1,
                                    profile.c2, profile.eps_mod, profile.alpha);
}

bool ExperimentConfig::wants_csv() const {
  return std::find(output.formats.begin(), output.formats.end(), "csv") != output.formats.end();
}

bool ExperimentConfig::wants_json() const {
  return std::find(output.formats.begin(), output.formats.end(), "json") != output.formats.end();
}

std::vector<int> ExperimentConfig::N_values() const {
  return run.N_list.empty() ? std::vector<int>{run.N} : run.N_list;
}

std::vector<Complex> ExperimentConfig::z_grid() const {
  std::vector<double> re = run.z_re;
  if (run.z_re_range.size() == 3) {
    re.clear();
    const double lo = run.z_re_range[0], hi = run.z_re_range[1], step = run.z_re_range[2];
    const long long n = std::llround((hi - lo) / step);
    for (long long i = 0; i <= n; ++i) re.push_back(lo + static_cast<double>(i) * step);
  }
  std::vector<Complex> grid;
  for (double y : run.z_im)
    for (double x : re) grid.emplace_back(x, y);
  return grid;
}

std::string ExperimentConfig::to_json() const {
  ordered_json doc = ordered_json::object();
  for (const auto& f : fields()) {
    if (f.section[0] == '\0') {
      doc[f.key] = f.get(*this);
    } else {
      doc[f.section][f.key] = f.get(*this);
    }
  }
  return doc.dump();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : to_json()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace corrmat

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

#include "corrmat/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <numbers>
#include <optional>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "corrmat/dyson.hpp"
#include "corrmat/edgestats.hpp"
#include "corrmat/io.hpp"
#include "corrmat/rng.hpp"
#include "corrmat/sampler.hpp"
#include "corrmat/verify.hpp"
#include "internal.hpp"

namespace corrmat {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kReferenceSalt = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kNullSalt = 0xd1b54a32d192ed03ULL;
constexpr int kCovarianceBlock = 1000;

ordered_json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

struct Check {
  std::string stage;
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;
};

class Context {
 public:
  explicit Context(const ExperimentConfig& c) : cfg(c), profile(c.make_profile()) {}

  const ExperimentConfig& cfg;
  CorrelationProfile profile;
  ArtifactSet artifacts;
  std::vector<Check> checks;
  ordered_json results = ordered_json::object();

  void csv(const std::string& name, const CsvTable& table) {
    if (cfg.wants_csv()) artifacts.add(name, table.str());
  }

  void check(const std::string& stage, const std::string& name, bool passed, double value,
             double threshold, const std::string& relation) {
    checks.push_back({stage, name, passed, value, threshold, relation});
  }

  DysonOptions dyson() const {
    DysonOptions o;
    o.tol = cfg.run.tol;
    return o;
  }

  int K_s() const {
    if (cfg.run.K_s > 0) return cfg.run.K_s;
    return profile.translation_invariant() ? 1 : cfg.run.K_u;
  }

  const SpectralDensity& density() {
    if (!density_) {
      DensityOptions o;
      o.K_s = cfg.run.K_s;
      o.K_u = cfg.run.K_u;
      o.tol = cfg.run.tol;
      density_ = density_and_edges(profile, energy_grid(cfg.run.E_min, cfg.run.E_max,
                                                        cfg.run.E_step),
                                   cfg.run.eta_recover, o);
    }
    return *density_;
  }

 private:
  std::optional<SpectralDensity> density_;
};

bool is_goe(const Context& ctx) { return ctx.profile.kind() == ProfileKind::kGoe; }

void stage_solve(Context& ctx) {
  const SpectralDensity& d = ctx.density();
  CsvTable dens({"E", "rho"});
  for (size_t i = 0; i < d.energies.size(); ++i) dens.row().add(d.energies[i]).add(d.rho[i]);
  ctx.csv("density.csv", dens);

  const std::vector<Complex> grid = ctx.cfg.z_grid();
  const DysonKernel kernel(ctx.profile, ctx.K_s(), ctx.cfg.run.K_u);
  std::vector<DysonResult> sols(grid.size());
  internal::parallel_for(static_cast<int>(grid.size()), [&](int i) {
    sols[i] = solve_dyson(kernel, grid[i], ctx.dyson());
  });

  const bool goe = is_goe(ctx);
  std::vector<std::string> header{"z_re", "z_im", "m_re", "m_im", "residual", "iterations",
                                  "newton_steps"};
  if (goe) {
    for (const char* h : {"m_sc_re", "m_sc_im", "error"}) header.emplace_back(h);
  }
  CsvTable st(header);
  double max_residual = 0.0, max_error = 0.0, sup_g = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    const Complex m = stieltjes(sols[i].g);
    max_residual = std::max(max_residual, sols[i].residual);
    sup_g = std::max(sup_g, sols[i].g.sup_norm());
    st.row().add(grid[i].real()).add(grid[i].imag()).add(m.real()).add(m.imag());
    st.add(sols[i].residual).add(sols[i].iterations).add(sols[i].newton_steps);
    if (goe) {
      const Complex ref = semicircle_stieltjes(grid[i]);
      const double err = std::abs(m - ref);
      max_error = std::max(max_error, err);
      st.add(ref.real()).add(ref.imag()).add(err);
    }
  }
  ctx.csv("stieltjes.csv", st);

  const double eta = d.eta_recover;
  ctx.check("solve", "density_mass", std::abs(d.mass - 1.0) <= 1e-3, std::abs(d.mass - 1.0),
            1e-3, "<=");
  ctx.check("solve", "solver_residual", max_residual <= ctx.cfg.run.tol, max_residual,
            ctx.cfg.run.tol, "<=");
  if (goe) {
    const double edge_tol = 10.0 * eta;
    const double inv_pi = 1.0 / std::numbers::pi;
    ctx.check("solve", "semicircle_stieltjes", max_error <= 1e-6, max_error, 1e-6, "<=");
    ctx.check("solve", "left_edge", std::abs(d.E_L + 2.0) <= edge_tol, std::abs(d.E_L + 2.0),
              edge_tol, "<=");
    ctx.check("solve", "right_edge", std::abs(d.E_R - 2.0) <= edge_tol, std::abs(d.E_R - 2.0),
              edge_tol, "<=");
    const double rl = std::abs(d.c_L / inv_pi - 1.0), rr = std::abs(d.c_R / inv_pi - 1.0);
    ctx.check("solve", "left_edge_constant", rl <= 0.05, rl, 0.05, "<=");
    ctx.check("solve", "right_edge_constant", rr <= 0.05, rr, 0.05, "<=");
  } else {
    const double asym = std::abs(d.E_L + d.E_R);
    ctx.check("solve", "edge_symmetry", asym <= 10.0 * eta, asym, 10.0 * eta, "<=");
  }

  ordered_json r;
  r["E_L"] = number(d.E_L);
  r["E_R"] = number(d.E_R);
  r["c_L"] = number(d.c_L);
  r["c_R"] = number(d.c_R);
  r["gamma_L"] = number(std::pow(std::numbers::pi * d.c_L, 2.0 / 3.0));
  r["gamma_R"] = number(std::pow(std::numbers::pi * d.c_R, 2.0 / 3.0));
  r["mass"] = number(d.mass);
  r["eta_recover"] = number(eta);
  r["threshold"] = number(d.threshold);
  r["density_max_residual"] = number(d.max_solver_residual);
  r["z_points"] = grid.size();
  r["max_residual"] = number(max_residual);
  r["sup_g"] = number(sup_g);
  if (goe) r["max_semicircle_error"] = number(max_error);
  ctx.results["solve"] = r;
}

// Chan et al. merge of per-block (count, mean, M2).
struct Moments {
  double count = 0.0, mean = 0.0, m2 = 0.0;
  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    const double n = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / n;
    m2 += o.m2 + delta * delta * count * o.count / n;
    count = n;
  }
};

void stage_sample(Context& ctx) {
  const int N = ctx.cfg.run.N;
  const int trials = ctx.cfg.run.n_trials;
  const std::uint64_t seed = ctx.cfg.seed;
  const Ensemble ens(ctx.profile, N);
  const std::vector<Quadruple> quads = audit_quadruples(N);
  const size_t nq = quads.size();

  const int blocks = (trials + kCovarianceBlock - 1) / kCovarianceBlock;
  std::vector<std::vector<Moments>> partial(blocks, std::vector<Moments>(nq));
  internal::parallel_for(blocks, [&](int b) {
    const int lo = b * kCovarianceBlock, hi = std::min(trials, lo + kCovarianceBlock);
    for (int t = lo; t < hi; ++t) {
      const SampleMatrix H = ens.sample(seed, static_cast<std::uint64_t>(t));
      for (size_t q = 0; q < nq; ++q) {
        const auto& [i, j, k, l] = quads[q];
        partial[b][q].add(N * H.entries(i, j) * H.entries(k, l));
      }
    }
  });
  std::vector<Moments> total(nq);
  for (const auto& p : partial)
    for (size_t q = 0; q < nq; ++q) total[q].merge(p[q]);

  CsvTable cov({"i", "j", "k", "l", "realized", "estimate", "std_error", "z_score", "within"});
  int within = 0;
  double worst = 0.0;
  for (size_t q = 0; q < nq; ++q) {
    const auto& [i, j, k, l] = quads[q];
    const double realized = ens.covariance().xi(i, j, k, l);
    const double var = trials > 1 ? total[q].m2 / (total[q].count - 1.0) : 0.0;
    const double se = std::sqrt(var / total[q].count);
    const double zs = se > 0.0 ? (total[q].mean - realized) / se
                               : (total[q].mean == realized ? 0.0 : INFINITY);
    const bool ok = std::abs(zs) <= 5.0;
    within += ok ? 1 : 0;
    worst = std::max(worst, std::abs(zs));
    cov.row().add(i).add(j).add(k).add(l).add(realized).add(total[q].mean).add(se).add(zs).add(ok);
  }
  ctx.csv("covariance.csv", cov);
  const int need = static_cast<int>(nq) - 1;
  ctx.check("sample", "covariance_audit", within >= need, within, need, ">=");

  if (ctx.cfg.run.write_matrices) {
    for (int t = 0; t < trials; ++t) {
      ctx.artifacts.add_binary("matrices/" + ens.tag() + "_" + std::to_string(t) + ".cmat",
                               encode_matrix(ens.sample(seed, static_cast<std::uint64_t>(t))));
    }
  }

  ordered_json r;
  r["N"] = N;
  r["n_trials"] = trials;
  r["ensemble"] = ens.tag();
  r["quadruples"] = nq;
  r["within_5_se"] = within;
  r["max_abs_z_score"] = number(worst);
  r["decay_constant"] = number(ens.covariance().decay_constant());
  if (const Filter* f = ens.filter()) {
    r["psd_clipped"] = f->psd_clipped;
    r["clip_mass"] = number(f->clip_mass);
  }
  ctx.results["sample"] = r;
}

void stage_locallaw(Context& ctx) {
  const RunConfig& run = ctx.cfg.run;
  const SpectralDensity& d = ctx.density();
  LocalLawOptions opts;
  opts.dyson = ctx.dyson();
  opts.domain.log_power = run.domain_log_power;
  opts.domain.enforce = run.enforce_domain;

  const std::vector<int> Ns = ctx.cfg.N_values();
  const bool bulk = std::isfinite(run.eta_exponent);
  const double E_mid = 0.5 * (d.E_L + d.E_R);

  CsvTable table({"N", "trial", "z_re", "z_im", "Lambda", "gamma_im", "Gamma", "kappa", "rho_z",
                  "omega", "bound", "ratio", "in_domain"});
  std::vector<double> xs, medians;
  double max_ratio = 0.0;
  ordered_json per_n = ordered_json::array();
  for (int N : Ns) {
    const std::vector<Complex> grid =
        bulk ? std::vector<Complex>{Complex(E_mid, std::pow(static_cast<double>(N),
                                                             -run.eta_exponent))}
             : ctx.cfg.z_grid();
    const LocalLawResult res =
        local_law_check(ctx.profile, N, grid, run.n_trials, ctx.cfg.seed, d, opts);
    for (const auto& rep : res.reports) {
      table.row().add(rep.N).add(rep.trial).add(rep.z.real()).add(rep.z.imag()).add(rep.Lambda);
      table.add(rep.gamma_im).add(rep.Gamma).add(rep.kappa).add(rep.rho_z).add(rep.omega);
      table.add(rep.bound).add(rep.ratio).add(rep.in_domain);
    }
    xs.push_back(N);
    medians.push_back(res.median_lambda);
    max_ratio = std::max(max_ratio, res.max_ratio);
    ordered_json e;
    e["N"] = N;
    e["median_lambda"] = number(res.median_lambda);
    e["max_lambda"] = number(res.max_lambda);
    e["max_ratio"] = number(res.max_ratio);
    per_n.push_back(e);
  }
  ctx.csv("locallaw.csv", table);

  ordered_json r;
  r["per_N"] = per_n;
  r["max_ratio"] = number(max_ratio);
  ctx.check("locallaw", "bound_ratio", max_ratio <= run.local_law_constant, max_ratio,
            run.local_law_constant, "<=");
  if (Ns.size() >= 2) {
    const PowerFit fit = fit_power_law(xs, medians);
    r["median_lambda_exponent"] = number(fit.exponent);
    r["median_lambda_fit_r2"] = number(fit.r2);
    const bool ok = fit.exponent >= -0.65 && fit.exponent <= -0.35;
    ctx.check("locallaw", "median_lambda_exponent", ok, fit.exponent, -0.5, "in [-0.65, -0.35]");
  }

  if (!run.f_N_list.empty()) {
    const Complex z = ctx.cfg.z_grid().front();
    const FIterationScaling fs = f_iteration_scaling(ctx.profile, z, run.f_N_list, ctx.dyson());
    CsvTable ft({"N", "f_error", "ff_error", "sv_distance", "sv_tolerance", "residual_constant",
                 "residual_inf"});
    for (const auto& rep : fs.reports) {
      ft.row().add(rep.N).add(rep.f_error).add(rep.ff_error).add(rep.sv_distance);
      ft.add(rep.sv_tolerance).add(rep.residual_constant).add(rep.residual_inf);
    }
    ctx.csv("fscaling.csv", ft);
    const auto in_window = [](double p) { return p >= -0.65 && p <= -0.35; };
    ctx.check("locallaw", "f_iterate_exponent", in_window(fs.single.exponent), fs.single.exponent,
              -0.5, "in [-0.65, -0.35]");
    ctx.check("locallaw", "ff_iterate_exponent", in_window(fs.double_iterate.exponent),
              fs.double_iterate.exponent, -0.5, "in [-0.65, -0.35]");
    bool sv_ok = true;
    for (const auto& rep : fs.reports) sv_ok = sv_ok && rep.sv_passed();
    ctx.check("locallaw", "singular_values", sv_ok, fs.reports.back().sv_distance,
              fs.reports.back().sv_tolerance, "<=");
    ordered_json f;
    f["z_re"] = z.real();
    f["z_im"] = z.imag();
    f["single_exponent"] = number(fs.single.exponent);
    f["single_r2"] = number(fs.single.r2);
    f["double_exponent"] = number(fs.double_iterate.exponent);
    f["double_r2"] = number(fs.double_iterate.r2);
    r["f_iteration"] = f;
  }
  ctx.results["locallaw"] = r;
}

void stage_residual(Context& ctx) {
  const RunConfig& run = ctx.cfg.run;
  CsvTable table({"N", "z_re", "z_im", "trial", "r_inf", "bound", "passed"});
  int failures = 0, total = 0;
  double worst = 0.0;
  for (int N : ctx.cfg.N_values()) {
    for (const Complex& z : ctx.cfg.z_grid()) {
      const ResidualReport rep = residual_check(ctx.profile, N, z, run.n_trials, ctx.cfg.seed);
      for (size_t t = 0; t < rep.r_values.size(); ++t) {
        const bool ok = rep.r_values[t] <= rep.bound;
        table.row().add(N).add(z.real()).add(z.imag()).add(static_cast<int>(t));
        table.add(rep.r_values[t]).add(rep.bound).add(ok);
        worst = std::max(worst, rep.r_values[t] / rep.bound);
      }
      failures += rep.failures;
      total += rep.n_trials;
    }
  }
  ctx.csv("residual.csv", table);
  ctx.check("residual", "residual_bound", failures == 0, failures, 0, "==");
  ordered_json r;
  r["trials"] = total;
  r["failures"] = failures;
  r["max_ratio"] = number(worst);
  ctx.results["residual"] = r;
}

void stage_jaffard(Context& ctx) {
  const RunConfig& run = ctx.cfg.run;
  const int n = run.jaffard_instances;
  const double target = run.jaffard_decay - 0.7;
  std::vector<DecayReport> reps(n);
  internal::parallel_for(n, [&](int t) {
    const RealMatrix b = random_decay_matrix(run.jaffard_N, run.jaffard_decay, run.jaffard_op_norm,
                                             ctx.cfg.seed, static_cast<std::uint64_t>(t));
    const RealMatrix a = RealMatrix::Identity(run.jaffard_N, run.jaffard_N) + b;
    reps[t] = jaffard_inverse_decay(a, run.jaffard_decay);
  });
  CsvTable table({"instance", "fitted_exponent", "fit_r2", "bins_used", "exponent_ok", "r2_ok"});
  int exp_ok = 0, r2_ok = 0;
  for (int t = 0; t < n; ++t) {
    const bool e = reps[t].fitted_exponent >= target;
    const bool q = reps[t].fit_r2 >= 0.8;
    exp_ok += e ? 1 : 0;
    r2_ok += q ? 1 : 0;
    table.row().add(t).add(reps[t].fitted_exponent).add(reps[t].fit_r2).add(reps[t].bins_used);
    table.add(e).add(q);
  }
  ctx.csv("jaffard.csv", table);
  const int need = (9 * n + 9) / 10;
  ctx.check("jaffard", "inverse_decay_exponent", exp_ok >= need, exp_ok, need, ">=");
  ctx.check("jaffard", "inverse_decay_fit_r2", r2_ok >= need, r2_ok, need, ">=");

  const ProductDecayReport prod =
      product_decay_check(run.product_N, run.product_beta, run.product_pairs, ctx.cfg.seed);
  CsvTable pt({"pair", "lhs", "rhs", "holds"});
  for (size_t p = 0; p < prod.lhs.size(); ++p)
    pt.row().add(static_cast<int>(p)).add(prod.lhs[p]).add(prod.rhs[p]).add(prod.lhs[p] <= prod.rhs[p]);
  ctx.csv("products.csv", pt);
  ctx.check("jaffard", "product_decay", prod.violations == 0, prod.violations, 0, "==");

  ordered_json r;
  r["instances"] = n;
  r["target_exponent"] = target;
  r["exponent_passes"] = exp_ok;
  r["r2_passes"] = r2_ok;
  r["product_pairs"] = prod.lhs.size();
  r["product_constant"] = number(prod.constant);
  r["product_max_ratio"] = number(prod.max_ratio);
  ctx.results["jaffard"] = r;
}

void stage_edge(Context& ctx) {
  const SpectralDensity& d = ctx.density();
  const std::vector<int> Ns = ctx.cfg.N_values();
  const EdgeLocationReport rep =
      edge_location_check(ctx.profile, Ns, ctx.cfg.run.n_trials, ctx.cfg.seed, d);
  CsvTable table({"N", "max_excess", "tolerance"});
  for (size_t i = 0; i < Ns.size(); ++i)
    table.row().add(Ns[i]).add(rep.max_excess[i]).add(std::pow(static_cast<double>(Ns[i]), -0.15));
  ctx.csv("edge.csv", table);
  if (Ns.size() >= 2) {
    ctx.check("edge", "excess_slope", rep.epsilon_fit < ctx.cfg.run.edge_slope_max,
              rep.epsilon_fit, ctx.cfg.run.edge_slope_max, "<");
  }
  ctx.check("edge", "excess_largest_N", rep.max_excess_last < rep.tolerance_last,
            rep.max_excess_last, rep.tolerance_last, "<");
  ordered_json r;
  r["E_L"] = number(d.E_L);
  r["E_R"] = number(d.E_R);
  r["n_trials"] = rep.n_trials;
  r["slope"] = number(rep.epsilon_fit);
  r["fit_r2"] = number(rep.fit_r2);
  ctx.results["edge"] = r;
}

CsvTable gap_table(const GapSample& s) {
  std::vector<std::string> header{"trial"};
  for (int j = 1; j <= s.k; ++j) header.push_back("gap_" + std::to_string(j));
  CsvTable t(header);
  for (int i = 0; i < s.gaps.rows(); ++i) {
    t.row().add(i);
    for (int j = 0; j < s.k; ++j) t.add(s.gaps(i, j));
  }
  return t;
}

void stage_universality(Context& ctx) {
  const RunConfig& run = ctx.cfg.run;
  const SpectralDensity& d = ctx.density();
  const EdgeSide side = parse_edge_side(run.edge_side);
  const int N = run.N, n = run.n_trials;
  require(run.null_pool >= 2 * n, ErrorCode::kParameter,
          "run.null_pool must be at least 2 * n_trials for disjoint null splits");

  const Ensemble ens(ctx.profile, N);
  const double gamma = scaling_factor(d, side);
  const GapSample model = gap_statistics(ens, run.k, n, gamma, side, ctx.cfg.seed);

  // The reference uses its own seed so its GOE draws never coincide with the
  // GOE component of the model samples.
  const std::uint64_t ref_seed = splitmix64(ctx.cfg.seed ^ kReferenceSalt);
  const GapSample pool = goe_gap_statistics(N, run.k, run.null_pool, side, ref_seed);
  GapSample reference = pool;
  reference.gaps = pool.gaps.topRows(n);
  reference.ensemble_tag = "goe_reference";

  ctx.csv("gaps_" + std::string(to_string(ctx.profile.kind())) + ".csv", gap_table(model));
  ctx.csv("gaps_goe_reference.csv", gap_table(reference));

  CsvTable kt({"gap", "ks", "critical"});
  const double critical = ks_critical_value(n, n);
  double ks_first = 0.0;
  ordered_json per_gap = ordered_json::array();
  for (int j = 0; j < run.k; ++j) {
    const double ks = ks_distance(model.column(j), reference.column(j));
    if (j == 0) ks_first = ks;
    kt.row().add(j + 1).add(ks).add(critical);
    per_gap.push_back(number(ks));
  }
  ctx.csv("ks.csv", kt);
  ctx.check("universality", "ks_distance", ks_first <= run.ks_threshold, ks_first,
            run.ks_threshold, "<=");

  const NullCalibration null = ks_null_calibration(
      pool.column(0), n, n, run.null_audits, splitmix64(ctx.cfg.seed ^ kNullSalt));
  CsvTable nt({"audit", "ks", "critical", "passed"});
  for (size_t a = 0; a < null.statistics.size(); ++a)
    nt.row().add(static_cast<int>(a)).add(null.statistics[a]).add(null.critical)
        .add(null.statistics[a] <= null.critical);
  ctx.csv("ks_null.csv", nt);
  ctx.check("universality", "null_calibration", null.pass_fraction() >= run.null_pass_fraction,
            null.pass_fraction(), run.null_pass_fraction, ">=");

  ordered_json r;
  r["N"] = N;
  r["n_trials"] = n;
  r["k"] = run.k;
  r["edge_side"] = std::string(to_string(side));
  r["gamma_scale"] = number(gamma);
  r["ks"] = number(ks_first);
  r["ks_per_gap"] = per_gap;
  r["ks_threshold"] = run.ks_threshold;
  r["null_critical"] = number(null.critical);
  r["null_pool"] = run.null_pool;
  r["null_audits"] = null.audits;
  r["null_passes"] = null.passes;
  ctx.results["universality"] = r;
}

using Stage = void (*)(Context&);

const std::vector<std::pair<std::string, Stage>>& stages() {
  static const std::vector<std::pair<std::string, Stage>> s{
      {"sample", stage_sample},       {"solve", stage_solve},   {"locallaw", stage_locallaw},
      {"residual", stage_residual},   {"jaffard", stage_jaffard}, {"edge", stage_edge},
      {"universality", stage_universality}};
  return s;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : stages()) v.push_back(name);
    v.emplace_back("all");
    return v;
  }();
  return names;
}

bool is_subcommand(std::string_view name) {
  const auto& s = subcommands();
  return std::find(s.begin(), s.end(), name) != s.end();
}

Complex semicircle_stieltjes(Complex z) {
  const Complex s = std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
  Complex m = 0.5 * (-z + s);
  if (m.imag() < 0.0 || (m.imag() == 0.0 && std::abs(m) > 1.0)) m = 0.5 * (-z - s);
  return m;
}

RunOutcome run_experiment(std::string_view subcommand, const ExperimentConfig& config) {
  RunOutcome out;
  try {
    require(is_subcommand(subcommand), ErrorCode::kParameter,
            "unknown subcommand '" + std::string(subcommand) + "'");
    config.validate();
#ifdef _OPENMP
    if (config.threads > 0) omp_set_num_threads(config.threads);
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    Context ctx(config);
    ordered_json timings = ordered_json::object();
    for (const auto& [name, fn] : stages()) {
      if (subcommand != "all" && subcommand != name) continue;
      const auto s0 = std::chrono::steady_clock::now();
      fn(ctx);
      timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count();
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool passed = true;
    ordered_json checks = ordered_json::array();
    for (const Check& c : ctx.checks) {
      passed = passed && c.passed;
      ordered_json j;
      j["stage"] = c.stage;
      j["name"] = c.name;
      j["passed"] = c.passed;
      j["value"] = number(c.value);
      j["threshold"] = number(c.threshold);
      j["relation"] = c.relation;
      checks.push_back(j);
    }
    const ordered_json params = ordered_json::parse(config.to_json());

    ordered_json summary;
    summary["tool"] = "corrmat";
    summary["subcommand"] = std::string(subcommand);
    summary["profile"] = ctx.profile.describe();
    summary["seed"] = config.seed;
    summary["results"] = ctx.results;
    summary["checks"] = checks;
    summary["passed"] = passed;
    out.summary_json = summary.dump(2) + "\n";
    if (config.wants_json()) ctx.artifacts.add("summary.json", out.summary_json);

    ordered_json manifest;
    manifest["tool"] = "corrmat";
    manifest["version"] = kVersion;
    manifest["subcommand"] = std::string(subcommand);
    manifest["config_hash"] = config.hash();
    manifest["seed"] = config.seed;
    manifest["threads"] = threads;
    manifest["parameters"] = params;
    manifest["artifacts"] = ctx.artifacts.names();
    manifest["started_at"] = started;
    manifest["wall_clock_seconds"] = wall;
    manifest["stage_timings"] = timings;
    ctx.artifacts.add("manifest.json", manifest.dump(2) + "\n");

    ctx.artifacts.commit(config.output.dir);
    out.artifacts = ctx.artifacts.names();
    out.exit_code = passed ? kExitPass : kExitCheckFailed;
  } catch (const Error& e) {
    out = RunOutcome{};
    out.error = e.what();
    out.error_status = static_cast<int>(e.code());
  } catch (const std::exception& e) {
    out = RunOutcome{};
    out.error = std::string("internal error: ") + e.what();
    out.error_status = -1;
  }
  return out;
}

}  // namespace corrmat

#pragma once

// Command-line surface: resolves a RunSpec (flags + optional flat key=value
// config file) into library calls and emits CSV or JSON. Deterministic for a
// given spec: fixed formatting, fixed seeds, no locale dependence.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "levytandem/errors.hpp"
#include "levytandem/heavy_traffic.hpp"
#include "levytandem/laplace_inversion.hpp"
#include "levytandem/levy_models.hpp"
#include "levytandem/pk_transforms.hpp"
#include "levytandem/reference_tables.hpp"
#include "levytandem/simulation.hpp"

#include "json.hpp"

namespace levytandem::cli {

struct RunSpec {
  std::string task;        // lst-eval | invert | approx | simulate | compare | repro
  std::string model;       // brownian | cp-exp | cp-pareto | stable (task-dependent default)
  double lambda = 1.0;     // compound Poisson arrival rate
  double mu = 1.0;         // exponential job rate
  double nu = 1.5;         // Pareto tail index
  double alpha = 1.5;      // stable index
  double sigma2 = 2.0;     // Brownian variance
  double mean = 1.0;       // mean input rate for Brownian/stable models
  std::optional<double> rho1, rho2;  // loads: r_i = EJ1 / rho_i
  std::optional<double> r1, r2;      // explicit rates
  std::optional<double> gamma, eps;  // Regime II parameterization
  std::string regime = "1";          // approx/compare: 1 | 2 | ml
  std::string which = "downstream";  // lst-eval/invert/simulate tails: upstream | downstream
  std::string table;                 // repro dataset id
  std::vector<double> xs;            // x grid (or s grid for lst-eval)
  std::uint64_t seed = 1;
  std::uint64_t arrivals = 0;        // simulate/compare/repro --simulate; 0 = task default
  int replications = 4;
  double horizon = 100000.0;         // diffusive mode
  double step = 0.0;                 // diffusive mode; 0 = default_step(eps)
  double burn_in = 0.1;
  int batches = 30;
  std::string format = "csv";        // csv | json
  std::string method = "euler";      // inversion method: euler | stehfest
  double target_accuracy = 1e-8;
  int euler_terms = 40;
  int euler_smoothing = 15;
  int stehfest_terms = 14;
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// Row-oriented emitter: one fixed column schema, CSV or JSON rendering.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) {
      throw ParameterError("Table: row width does not match header");
    }
    rows_.push_back(std::move(cells));
  }

  void emit(std::ostream& os, const std::string& format) const {
    if (format == "csv") {
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        os << (i ? "," : "") << columns_[i];
      }
      os << "\n";
      for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
      }
    } else if (format == "json") {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& row : rows_) {
        nlohmann::json obj;
        for (std::size_t i = 0; i < row.size(); ++i) obj[columns_[i]] = row[i];
        arr.push_back(obj);
      }
      os << arr.dump(2) << "\n";
    } else {
      throw ParameterError("unknown output format '" + format + "' (expected csv or json)");
    }
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace detail

inline LevyModel build_model(const RunSpec& spec, const std::string& fallback = "cp-exp") {
  const std::string kind = spec.model.empty() ? fallback : spec.model;
  if (kind == "brownian") return LevyModel::brownian(spec.sigma2, spec.mean);
  if (kind == "cp-exp") return LevyModel::compound_poisson(spec.lambda, JobLaw::exponential(spec.mu));
  if (kind == "cp-pareto") {
    return LevyModel::compound_poisson(spec.lambda, JobLaw::pareto(spec.nu));
  }
  if (kind == "stable") return LevyModel::alpha_stable(spec.alpha, spec.mean);
  throw ParameterError("unknown model '" + kind +
                       "' (expected brownian, cp-exp, cp-pareto, or stable)");
}

// Rate resolution: exactly one of (--r1,--r2), (--rho1,--rho2), (--gamma,--eps).
inline TandemParams build_params(const RunSpec& spec, const LevyModel& model) {
  const int n_rates = (spec.r1 && spec.r2) ? 1 : 0;
  const int n_loads = (spec.rho1 && spec.rho2) ? 1 : 0;
  const int n_regime = (spec.gamma && spec.eps) ? 1 : 0;
  if (n_rates + n_loads + n_regime != 1) {
    throw ParameterError(
        "specify exactly one rate parameterization: --r1/--r2, --rho1/--rho2, or --gamma/--eps");
  }
  const double mean = model.mean_input;
  if (n_rates) return TandemParams::direct(*spec.r1, *spec.r2, mean);
  if (n_loads) return TandemParams::from_loads(*spec.rho1, *spec.rho2, mean);
  return TandemParams::regime2(*spec.gamma, *spec.eps, mean);
}

inline InversionConfig build_inversion(const RunSpec& spec) {
  InversionConfig cfg;
  if (spec.method == "euler") {
    cfg.method = InversionMethod::EulerSummation;
  } else if (spec.method == "stehfest") {
    cfg.method = InversionMethod::GaverStehfest;
  } else {
    throw ParameterError("unknown inversion method '" + spec.method +
                         "' (expected euler or stehfest)");
  }
  cfg.target_accuracy = spec.target_accuracy;
  cfg.euler_truncation = spec.euler_terms;
  cfg.euler_smoothing = spec.euler_smoothing;
  cfg.stehfest_terms = spec.stehfest_terms;
  cfg.validate();
  return cfg;
}

namespace detail {

// Canonical resolved-parameter string; its FNV-1a hash stamps every output
// row so downstream tooling can detect parameter drift.
inline std::string params_hash(const RunSpec& spec, const LevyModel& model,
                               const TandemParams* params) {
  std::ostringstream os;
  os << "task=" << spec.task << ";model=";
  switch (model.kind) {
    case ModelKind::Brownian:
      os << "brownian;sigma2=" << fmt(model.sigma2, "%.17g");
      break;
    case ModelKind::CompoundPoisson:
      os << (model.jobs.kind == JobKind::Exponential ? "cp-exp" : "cp-pareto");
      os << ";lambda=" << fmt(model.lambda, "%.17g");
      if (model.jobs.kind == JobKind::Exponential) {
        os << ";mu=" << fmt(model.jobs.mu, "%.17g");
      } else {
        os << ";nu=" << fmt(model.jobs.nu, "%.17g") << ";xm=" << fmt(model.jobs.xm, "%.17g");
      }
      break;
    case ModelKind::AlphaStable:
      os << "stable;alpha=" << fmt(model.alpha, "%.17g");
      break;
  }
  os << ";mean=" << fmt(model.mean_input, "%.17g");
  if (params) {
    os << ";r1=" << fmt(params->r1, "%.17g") << ";r2=" << fmt(params->r2, "%.17g");
  }
  if (spec.task == "approx" || spec.task == "compare") os << ";regime=" << spec.regime;
  if (spec.task == "simulate" || spec.task == "compare") os << ";seed=" << spec.seed;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(os.str())));
  return std::string(buf);
}

inline void require_xs(const RunSpec& spec, const char* what) {
  if (spec.xs.empty()) {
    throw ParameterError(std::string(what) + ": --xs must list at least one point");
  }
}

// Upstream-only specs may give --r1 alone (or --rho1 alone).
inline double resolve_r1(const RunSpec& spec, const LevyModel& model) {
  double r1 = 0.0;
  if (spec.r1) {
    r1 = *spec.r1;
  } else if (spec.rho1) {
    if (!(*spec.rho1 > 0.0) || *spec.rho1 >= 1.0) {
      throw ParameterError("--rho1 must lie in (0, 1)");
    }
    r1 = model.mean_input / *spec.rho1;
  } else if (spec.gamma && spec.eps) {
    r1 = model.mean_input + *spec.gamma * *spec.eps;
  } else {
    throw ParameterError("upstream evaluation needs --r1, --rho1, or --gamma/--eps");
  }
  if (!(r1 > model.mean_input)) {
    throw ParameterError("upstream stability requires r1 > EJ1");
  }
  return r1;
}

}  // namespace detail

// lst-eval: table of (s, Re, Im) of the requested workload transform.
inline void cmd_lst_eval(const RunSpec& spec, std::ostream& out) {
  detail::require_xs(spec, "lst-eval");
  LevyModel model = build_model(spec);
  detail::Table table({"s", "re", "im", "which", "params_hash"});

  if (spec.which == "upstream") {
    const double r1 = detail::resolve_r1(spec, model);
    TandemSystem sys(model, TandemParams::direct(r1, (model.mean_input + r1) / 2.0, model.mean_input));
    const std::string hash = detail::params_hash(spec, model, nullptr);
    for (double s : spec.xs) {
      TransformValue v = lst_upstream(sys, TransformValue(s, 0.0));
      table.add_row({detail::fmt(s, "%.17g"), detail::fmt(v.real(), "%.17g"),
                     detail::fmt(v.imag(), "%.17g"), "upstream", hash});
    }
  } else if (spec.which == "downstream") {
    TandemParams params = build_params(spec, model);
    TandemSystem sys(model, params);
    const std::string hash = detail::params_hash(spec, model, &params);
    for (double s : spec.xs) {
      TransformValue v = lst_downstream(sys, TransformValue(s, 0.0));
      table.add_row({detail::fmt(s, "%.17g"), detail::fmt(v.real(), "%.17g"),
                     detail::fmt(v.imag(), "%.17g"), "downstream", hash});
    }
  } else {
    throw ParameterError("lst-eval: --which must be upstream or downstream");
  }
  table.emit(out, spec.format);
}

// invert: numerical tail P(Q > x) of the requested workload transform.
inline void cmd_invert(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  detail::require_xs(spec, "invert");
  LevyModel model = build_model(spec);
  InversionConfig icfg = build_inversion(spec);

  TransformFn lst;
  std::string hash;
  if (spec.which == "upstream") {
    const double r1 = detail::resolve_r1(spec, model);
    auto sys = std::make_shared<TandemSystem>(
        model, TandemParams::direct(r1, (model.mean_input + r1) / 2.0, model.mean_input));
    lst = [sys](TransformValue s) { return lst_upstream(*sys, s); };
    hash = detail::params_hash(spec, model, nullptr);
  } else if (spec.which == "downstream") {
    TandemParams params = build_params(spec, model);
    auto sys = std::make_shared<TandemSystem>(model, params);
    lst = [sys](TransformValue s) { return lst_downstream(*sys, s); };
    hash = detail::params_hash(spec, model, &params);
  } else {
    throw ParameterError("invert: --which must be upstream or downstream");
  }

  TailCurve curve = tail_curve(lst, spec.xs, icfg);
  for (const auto& w : curve.warnings) err << "warning: " << w << "\n";
  detail::Table table({"x", "p", "method", "params_hash"});
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    table.add_row({detail::fmt(curve.x[i], "%.17g"), detail::fmt(curve.p[i]), spec.method, hash});
  }
  table.emit(out, spec.format);
}

namespace detail {

struct ApproxCurve {
  std::vector<double> p;
  std::string method;
};

// Shared by cmd_approx and cmd_compare.
inline ApproxCurve approx_tail(const RunSpec& spec, const LevyModel& model,
                               const TandemParams& params, const std::vector<double>& xs) {
  ApproxCurve out;
  const ModelMoments mm = model_moments(model);
  if (spec.regime == "1") {
    if (!mm.variance_rate) {
      throw ParameterError(
          "Regime I tail approximation needs finite input variance; use --regime ml for "
          "heavy-tailed input");
    }
    out.method = "regime1";
    for (double x : xs) out.p.push_back(regime1_downstream_tail(*mm.variance_rate, params.eps, x));
  } else if (spec.regime == "2") {
    if (!mm.variance_rate) {
      throw ParameterError(
          "Regime II approximation requires finite input variance (heavy-tailed Regime II is an "
          "open problem); use --regime ml instead");
    }
    const double sigma2 = *mm.variance_rate;
    const double gamma = params.gamma;
    InversionConfig icfg;  // defaults keep repro byte-stable
    TransformFn lst = [sigma2, gamma](TransformValue s) {
      return regime2_joint_lst(sigma2, gamma, TransformValue(0.0), s);
    };
    out.method = "regime2";
    for (double x : xs) out.p.push_back(invert_tail(lst, params.eps * x, icfg));
  } else if (spec.regime == "ml") {
    if (model.kind != ModelKind::CompoundPoisson || model.jobs.kind != JobKind::Pareto) {
      throw ParameterError("the Mittag-Leffler approximation requires Pareto job input");
    }
    const double L = std::pow(model.jobs.xm, model.jobs.nu);
    const double delta = delta_scaling(model.lambda, params.r, model.jobs.nu, L)(params.eps);
    out.method = "ml";
    for (double x : xs) out.p.push_back(mittag_leffler_tail_approx(delta, model.jobs.nu, x));
  } else {
    throw ParameterError("unknown --regime '" + spec.regime + "' (expected 1, 2, or ml)");
  }
  return out;
}

inline SimResult run_simulation(const RunSpec& spec, const LevyModel& model,
                                const TandemParams& params, const std::vector<double>& xs) {
  SimConfig cfg;
  cfg.seed = spec.seed;
  cfg.replications = spec.replications;
  cfg.burn_in = spec.burn_in;
  cfg.batches = spec.batches;
  cfg.xs = xs;
  if (model.kind == ModelKind::CompoundPoisson) {
    cfg.arrivals_per_replication = spec.arrivals ? spec.arrivals : 1000000;
    return simulate_tandem_cp(model, params, cfg);
  }
  cfg.horizon = spec.horizon;
  cfg.step = spec.step > 0.0 ? spec.step : default_step(params.eps);
  return simulate_tandem_diffusive(model, params, cfg);
}

}  // namespace detail

// approx: heavy-traffic tail approximations; CSV header fixed as
// x,p,method,params_hash.
inline void cmd_approx(const RunSpec& spec, std::ostream& out) {
  detail::require_xs(spec, "approx");
  LevyModel model = build_model(spec, spec.regime == "ml" ? "cp-pareto" : "cp-exp");
  TandemParams params = build_params(spec, model);
  detail::ApproxCurve curve = detail::approx_tail(spec, model, params, spec.xs);
  const std::string hash = detail::params_hash(spec, model, &params);

  detail::Table table({"x", "p", "method", "params_hash"});
  for (std::size_t i = 0; i < spec.xs.size(); ++i) {
    table.add_row({detail::fmt(spec.xs[i], "%.17g"), detail::fmt(curve.p[i]), curve.method, hash});
  }
  table.emit(out, spec.format);
}

// simulate: Monte Carlo tail estimates with 95% half-widths; moment and
// rate metadata go to comment lines (CSV) or extra fields (JSON).
inline void cmd_simulate(const RunSpec& spec, std::ostream& out) {
  detail::require_xs(spec, "simulate");
  if (spec.which != "upstream" && spec.which != "downstream") {
    throw ParameterError("simulate: --which must be upstream or downstream");
  }
  LevyModel model = build_model(spec);
  TandemParams params = build_params(spec, model);
  SimResult res = detail::run_simulation(spec, model, params, spec.xs);
  const std::string hash = detail::params_hash(spec, model, &params);
  const bool upstream = spec.which == "upstream";
  const std::vector<double>& p = upstream ? res.tail_q1 : res.tail_q2;
  const std::vector<double>& hw = upstream ? res.tail_q1_hw : res.tail_q2_hw;
  const std::string method = model.kind == ModelKind::CompoundPoisson ? "sim-cp" : "sim-diffusive";

  if (spec.format == "csv") {
    out << "# eq1=" << detail::fmt(res.eq1) << " eq1_hw=" << detail::fmt(res.eq1_hw)
        << " eq2=" << detail::fmt(res.eq2) << " eq2_hw=" << detail::fmt(res.eq2_hw) << "\n";
    out << "# cov=" << detail::fmt(res.cov) << " cov_hw=" << detail::fmt(res.cov_hw)
        << " corr=" << detail::fmt(res.corr) << " corr_hw=" << detail::fmt(res.corr_hw) << "\n";
    out << "# input_rate=" << detail::fmt(res.mean_input_rate)
        << " input_rate_se=" << detail::fmt(res.input_rate_se)
        << " total_time=" << detail::fmt(res.total_time) << " batches=" << res.batches
        << " replications=" << res.replications << " seed=" << res.seed << "\n";
  }
  detail::Table table({"x", "p", "half_width", "method", "params_hash"});
  for (std::size_t i = 0; i < spec.xs.size(); ++i) {
    table.add_row({detail::fmt(spec.xs[i], "%.17g"), detail::fmt(p[i]), detail::fmt(hw[i]), method,
                   hash});
  }
  if (spec.format == "json") {
    nlohmann::json obj;
    obj["eq1"] = res.eq1;
    obj["eq1_hw"] = res.eq1_hw;
    obj["eq2"] = res.eq2;
    obj["eq2_hw"] = res.eq2_hw;
    obj["cov"] = res.cov;
    obj["cov_hw"] = res.cov_hw;
    obj["corr"] = res.corr;
    obj["corr_hw"] = res.corr_hw;
    obj["input_rate"] = res.mean_input_rate;
    obj["input_rate_se"] = res.input_rate_se;
    obj["total_time"] = res.total_time;
    obj["batches"] = res.batches;
    obj["replications"] = res.replications;
    obj["seed"] = res.seed;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < spec.xs.size(); ++i) {
      rows.push_back({{"x", spec.xs[i]}, {"p", p[i]}, {"half_width", hw[i]}, {"method", method}});
    }
    obj["tails"] = rows;
    obj["params_hash"] = hash;
    out << obj.dump(2) << "\n";
    return;
  }
  table.emit(out, spec.format);
}

// compare: simulated downstream tail vs the requested approximation, with
// the relative difference in percent: (approx - sim)/sim * 100.
inline void cmd_compare(const RunSpec& spec, std::ostream& out) {
  detail::require_xs(spec, "compare");
  LevyModel model = build_model(spec, spec.regime == "ml" ? "cp-pareto" : "cp-exp");
  TandemParams params = build_params(spec, model);
  detail::ApproxCurve curve = detail::approx_tail(spec, model, params, spec.xs);
  SimResult res = detail::run_simulation(spec, model, params, spec.xs);
  const std::string hash = detail::params_hash(spec, model, &params);

  detail::Table table(
      {"x", "p_sim", "half_width", "p_approx", "diff_percent", "method", "params_hash"});
  for (std::size_t i = 0; i < spec.xs.size(); ++i) {
    const double sim = res.tail_q2[i];
    const std::string diff =
        sim > 0.0 ? detail::fmt((curve.p[i] - sim) / sim * 100.0, "%.6g") : std::string("nan");
    table.add_row({detail::fmt(spec.xs[i], "%.17g"), detail::fmt(sim),
                   detail::fmt(res.tail_q2_hw[i]), detail::fmt(curve.p[i]), diff, curve.method,
                   hash});
  }
  table.emit(out, spec.format);
}

namespace detail {

inline void repro_finite_var(const RunSpec& spec, const reference::FiniteVarTable& t,
                             Table& table) {
  // lambda = 1, Exp(1) jobs: sigma^2 = 2.
  InversionConfig icfg;
  const double sigma2 = 2.0;
  TransformFn lst = [&](TransformValue s) {
    return regime2_joint_lst(sigma2, t.gamma, TransformValue(0.0), s);
  };
  std::optional<SimResult> sim;
  if (spec.arrivals > 0) {
    LevyModel model = LevyModel::compound_poisson(1.0, JobLaw::exponential(1.0));
    TandemParams params = TandemParams::from_loads(t.rho1, t.rho2, 1.0);
    SimConfig cfg;
    cfg.seed = spec.seed;
    cfg.replications = spec.replications;
    cfg.arrivals_per_replication = spec.arrivals;
    cfg.batches = spec.batches;
    cfg.xs = t.x;
    sim = simulate_tandem_cp(model, params, cfg);
  }
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const double r1v = regime1_downstream_tail(sigma2, t.eps, t.x[i]);
    const double r2v = invert_tail(lst, t.eps * t.x[i], icfg);
    table.add_row({t.id, fmt(t.x[i], "%.17g"), fmt(t.simul[i], "%.3f"), fmt(r1v),
                   fmt(t.r1[i], "%.3f"), fmt(r1v - t.r1[i], "%.3g"), fmt(r2v),
                   fmt(t.r2[i], "%.3f"), fmt(r2v - t.r2[i], "%.3g"),
                   sim ? fmt(sim->tail_q2[i]) : std::string(""),
                   sim ? fmt(sim->tail_q2_hw[i]) : std::string("")});
  }
}

inline void repro_heavy_tail(const RunSpec& spec, const reference::HeavyTailTable& t,
                             Table& table) {
  const double L = std::pow(1.0 / 3.0, t.nu);
  const double delta = delta_scaling(1.0, 1.0, t.nu, L)(t.eps);
  std::optional<SimResult> sim;
  if (spec.arrivals > 0) {
    LevyModel model = LevyModel::compound_poisson(1.0, JobLaw::pareto(t.nu));
    TandemParams params = TandemParams::from_loads(t.rho1, t.rho2, 1.0);
    SimConfig cfg;
    cfg.seed = spec.seed;
    cfg.replications = spec.replications;
    cfg.arrivals_per_replication = spec.arrivals;
    cfg.batches = spec.batches;
    cfg.xs = t.x;
    sim = simulate_tandem_cp(model, params, cfg);
  }
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const double ml = mittag_leffler_tail_approx(delta, t.nu, t.x[i]);
    table.add_row({t.id, fmt(t.x[i], "%.17g"), fmt(t.simul[i], "%.3f"), fmt(ml),
                   fmt(t.ml[i], "%.3f"), fmt(ml - t.ml[i], "%.3g"),
                   fmt(t.diff_percent[i], "%.2f"), sim ? fmt(sim->tail_q2[i]) : std::string(""),
                   sim ? fmt(sim->tail_q2_hw[i]) : std::string("")});
  }
}

}  // namespace detail

// repro: regenerate the bundled reference datasets (hard-coded parameters)
// next to their printed values, with diff columns; --simulate N adds a fresh
// stochastic column with half-widths.
inline void cmd_repro(const RunSpec& spec, std::ostream& out) {
  if (spec.table == "table1" || spec.table == "table2") {
    detail::Table table({"dataset", "x", "simul_printed", "r1", "r1_printed", "r1_diff", "r2",
                         "r2_printed", "r2_diff", "sim", "sim_hw"});
    if (spec.table == "table1") {
      detail::repro_finite_var(spec, reference::table1_left(), table);
      detail::repro_finite_var(spec, reference::table1_right(), table);
    } else {
      detail::repro_finite_var(spec, reference::table2_left(), table);
      detail::repro_finite_var(spec, reference::table2_right(), table);
    }
    table.emit(out, spec.format);
  } else if (spec.table == "table3") {
    detail::Table table({"dataset", "x", "simul_printed", "ml", "ml_printed", "ml_diff",
                         "diff_percent_printed", "sim", "sim_hw"});
    detail::repro_heavy_tail(spec, reference::table3_rho95(), table);
    detail::repro_heavy_tail(spec, reference::table3_rho99(), table);
    table.emit(out, spec.format);
  } else if (spec.table == "fig-correlation") {
    const auto& f = reference::fig_correlation();
    detail::Table table({"gamma", "c"});
    const double lo = std::log(f.gamma_min), hi = std::log(f.gamma_max);
    for (int i = 0; i < f.points; ++i) {
      const double g = std::exp(lo + (hi - lo) * double(i) / double(f.points - 1));
      table.add_row({detail::fmt(g, "%.17g"), detail::fmt(correlation_c(g), "%.17g")});
    }
    table.emit(out, spec.format);
  } else {
    throw ParameterError("unknown repro dataset '" + spec.table +
                         "' (expected table1, table2, table3, or fig-correlation)");
  }
}

// Dispatch; throws ParameterError/DomainError (validation) or NumericError.
inline void dispatch(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  if (spec.task == "lst-eval") {
    cmd_lst_eval(spec, out);
  } else if (spec.task == "invert") {
    cmd_invert(spec, out, err);
  } else if (spec.task == "approx") {
    cmd_approx(spec, out);
  } else if (spec.task == "simulate") {
    cmd_simulate(spec, out);
  } else if (spec.task == "compare") {
    cmd_compare(spec, out);
  } else if (spec.task == "repro") {
    cmd_repro(spec, out);
  } else {
    throw ParameterError("unknown task '" + spec.task + "'");
  }
}

}  // namespace levytandem::cli

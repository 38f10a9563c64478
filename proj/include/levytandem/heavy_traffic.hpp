#pragma once

// Heavy-traffic limit laws and approximations for the fluid tandem:
// Regime I (downstream only) and Regime II (both servers) finite-variance
// limits, the alpha-stable Regime I limit, the Delta(eps) scaling for
// heavy-tailed input with its Mittag-Leffler tail approximation,
// expansion-order validators for the psi expansions behind both regimes,
// and Tauberian ratio checks for the Pareto chain.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "levytandem/errors.hpp"
#include "levytandem/levy_models.hpp"
#include "levytandem/pk_transforms.hpp"
#include "levytandem/special_functions.hpp"

namespace levytandem {

using PhiFn = std::function<TransformValue(TransformValue)>;

enum class Regime { I, II };
enum class VarianceClass { Finite, HeavyTailed, AlphaStable };

// Parameter bundle describing one approximation run (CLI surface).
struct RegimeApprox {
  Regime regime = Regime::I;
  VarianceClass variance_class = VarianceClass::Finite;
  double sigma2 = 0.0;
  double eps = 0.0;
  double gamma = 0.0;
  double r = 0.0;
  double lambda = 0.0;
  double nu = 0.0;
  double alpha = 0.0;
  double L = 0.0;      // slowly-varying constant
  double delta = 0.0;  // Delta(eps) when heavy-tailed

  void validate() const {
    if (regime == Regime::II && variance_class != VarianceClass::Finite) {
      throw ParameterError(
          "RegimeApprox: Regime II is only available for finite-variance input "
          "(open problem for infinite variance)");
    }
    if (variance_class == VarianceClass::HeavyTailed && !(delta > 0.0)) {
      throw ParameterError("RegimeApprox: heavy-tailed approximation requires Delta > 0");
    }
  }
};

// Coefficients of phi(s) = r s + (sigma2/2) s^2 + k1 s^eta1 + o(s^eta1),
// with the induced second-order constants of the Regime II expansion.
struct ExpansionSpec {
  double r = 0.0;
  double sigma2 = 0.0;
  double k1 = 0.0;
  double eta1 = 3.0;
  double k2 = 0.0;
  double eta2 = 1.0;  // (eta1 - 1)/2 in the intermediate case

  void validate() const {
    if (!(eta1 > 2.0)) throw ParameterError("ExpansionSpec: eta1 must exceed 2");
  }
};

// ---------------------------------------------------------------------------
// Regime I, finite variance: product-form limit of (Q1, eps*Q2).
// ---------------------------------------------------------------------------

// (s1 phi'(0)/phi(s1)) * 1/(1 + sigma2 s2 / 2); the s2-factor is Exp(2/sigma2).
inline TransformValue regime1_joint_limit_finite_var(double sigma2, double r,
                                                     const PhiFn& phi, TransformValue s1,
                                                     TransformValue s2) {
  if (!(sigma2 > 0.0) || !(r > 0.0)) {
    throw ParameterError("regime1_joint_limit_finite_var: need sigma2 > 0 and r > 0");
  }
  TransformValue f1(1.0, 0.0);
  if (std::abs(s1) != 0.0) f1 = s1 * r / phi(s1);
  TransformValue f2 = TransformValue(1.0, 0.0) / (TransformValue(1.0, 0.0) + 0.5 * sigma2 * s2);
  return f1 * f2;
}

// Tail of the Regime I downstream approximation Q2 ~ Exp(2 eps / sigma2).
inline double regime1_downstream_tail(double sigma2, double eps, double x) {
  if (!(sigma2 > 0.0) || !(eps > 0.0)) {
    throw ParameterError("regime1_downstream_tail: need sigma2 > 0 and eps > 0");
  }
  if (x < 0.0) throw ParameterError("regime1_downstream_tail: x must be >= 0");
  return std::exp(-2.0 * eps * x / sigma2);
}

// ---------------------------------------------------------------------------
// Regime II, finite variance: joint LST of the scaled pair (eps Q1, eps Q2).
// ---------------------------------------------------------------------------

// Joint LST, free of eps:
//   [s2(g-2-s1 sigma2) - s1 g + (s2-s1) sigma sqrt(g^2/sigma2 + 2(g-1)s2)]
//   / [(s2 sigma2 + 2)((g-1)s2 - g s1 - s1^2 sigma2 / 2)].
// Valid for Re(s) >= 0; a small-negative analytic continuation is admitted so
// that moments can be taken by central differences at 0. The curve
// (g-1)s2 = g s1 + s1^2 sigma2/2 is a removable 0/0, evaluated by a 4-point
// Richardson limit along real perturbations of s1.
inline TransformValue regime2_joint_lst(double sigma2, double gamma, TransformValue s1,
                                        TransformValue s2) {
  if (!(gamma > 1.0)) throw ParameterError("regime2_joint_lst: gamma must exceed 1");
  if (!(sigma2 > 0.0)) throw ParameterError("regime2_joint_lst: sigma2 must be > 0");
  const double g = gamma;
  const double margin1 = -0.5 * std::min(2.0 / sigma2, g * g / (2.0 * sigma2 * (g - 1.0)));
  if (s1.real() < -0.5 * g / sigma2 || s2.real() < margin1) {
    throw DomainError("regime2_joint_lst: argument outside the admissible half-plane");
  }
  if (std::abs(s1) == 0.0 && std::abs(s2) == 0.0) return TransformValue(1.0, 0.0);
  if (std::abs(s2) == 0.0) {
    return TransformValue(2.0 * g / sigma2, 0.0) / (TransformValue(2.0 * g / sigma2, 0.0) + s1);
  }
  if (std::abs(s1) == 0.0) {
    TransformValue root = std::sqrt(TransformValue(g * g, 0.0) + 2.0 * s2 * sigma2 * (g - 1.0));
    return (TransformValue(g - 2.0, 0.0) + root) /
           ((g - 1.0) * (TransformValue(2.0, 0.0) + s2 * sigma2));
  }
  const double sigma = std::sqrt(sigma2);
  auto ratio_at = [&](TransformValue u1) {
    TransformValue root =
        std::sqrt(TransformValue(g * g / sigma2, 0.0) + 2.0 * (g - 1.0) * s2);
    TransformValue num =
        s2 * (TransformValue(g - 2.0, 0.0) - u1 * sigma2) - u1 * g + (s2 - u1) * sigma * root;
    TransformValue den = (g - 1.0) * s2 - g * u1 - 0.5 * sigma2 * u1 * u1;
    return num / den;
  };
  TransformValue den1 = s2 * sigma2 + 2.0;
  TransformValue den2 = (g - 1.0) * s2 - g * s1 - 0.5 * sigma2 * s1 * s1;
  const double den2_scale = 1.0 + (g - 1.0) * std::abs(s2) + g * std::abs(s1);
  if (std::abs(den2) <= 1e-8 * den2_scale) {
    const double h0 = 1e-3 * (1.0 + std::abs(s1));
    std::function<TransformValue(double)> gfun = [&](double h) {
      return ratio_at(s1 + TransformValue(h, 0.0));
    };
    return detail::richardson_limit(gfun, h0) / den1;
  }
  return ratio_at(s1) / den1;
}

struct Regime2Moments {
  double eq1 = 0.0;
  double eq2 = 0.0;
  double var_q1 = 0.0;
  double var_q2 = 0.0;
  double cov = 0.0;
  double corr = 0.0;
};

// Closed-form moments of the Regime II limit law.
inline Regime2Moments regime2_moments(double sigma2, double gamma) {
  if (!(gamma > 1.0)) throw ParameterError("regime2_moments: gamma must exceed 1");
  if (!(sigma2 > 0.0)) throw ParameterError("regime2_moments: sigma2 must be > 0");
  const double g = gamma;
  const double s4 = sigma2 * sigma2;
  Regime2Moments m;
  m.eq1 = sigma2 / (2.0 * g);
  m.eq2 = sigma2 * (g - 1.0) / (2.0 * g);
  m.var_q1 = s4 / (4.0 * g * g);
  m.var_q2 = (g - 1.0) * (g - 1.0) * (g + 2.0) * s4 / (4.0 * g * g * g);
  m.cov = (g - 1.0) * s4 / (4.0 * g * g * g);
  m.corr = 1.0 / std::sqrt(g * (g + 2.0));
  return m;
}

// Correlation c(gamma) = 1/sqrt(gamma (gamma + 2)) of the Regime II limit;
// strictly decreasing with range (0, 1/sqrt(3)).
inline double correlation_c(double gamma) {
  if (!(gamma > 1.0)) throw ParameterError("correlation_c: gamma must exceed 1");
  return 1.0 / std::sqrt(gamma * (gamma + 2.0));
}

// ---------------------------------------------------------------------------
// Heavy-tailed Regime I: Delta(eps) scaling and Mittag-Leffler tail.
// ---------------------------------------------------------------------------

// Closed-form scaling function for constant L:
//   Delta(eps) = (eps / ((lambda/r) |Gamma(1-nu)| L))^{1/(nu-1)}.
struct DeltaScaling {
  double lambda = 1.0;
  double r = 1.0;
  double nu = 1.5;
  double L = 1.0;

  double operator()(double eps) const {
    if (!(eps > 0.0)) throw ParameterError("DeltaScaling: eps must be > 0");
    const double c = (lambda / r) * std::abs(gamma_fn(1.0 - nu)) * L;
    const double delta = std::pow(eps / c, 1.0 / (nu - 1.0));
    if (!(delta < 1.0)) {
      throw ParameterError("DeltaScaling: eps too large, Delta(eps) >= 1");
    }
    return delta;
  }
};

inline DeltaScaling delta_scaling(double lambda, double r, double nu, double L_const) {
  if (!(nu > 1.0 && nu < 2.0)) {
    throw ParameterError("delta_scaling: nu must lie strictly in (1, 2)");
  }
  if (!(lambda > 0.0) || !(r > 0.0) || !(L_const > 0.0)) {
    throw ParameterError("delta_scaling: lambda, r, L must be > 0");
  }
  return DeltaScaling{lambda, r, nu, L_const};
}

// General mode retaining the (r - eps)^nu factor: solves
//   C (r-eps)^nu Delta^{nu-1} L(1/Delta) = eps,  C = -lambda Gamma(1-nu)/r^{nu+1} > 0,
// for Delta bracketed on (0, 1) with a user-supplied L evaluator.
inline double delta_scaling_root(double lambda, double r, double nu,
                                 const std::function<double(double)>& L_eval, double eps) {
  if (!(nu > 1.0 && nu < 2.0)) {
    throw ParameterError("delta_scaling_root: nu must lie strictly in (1, 2)");
  }
  if (!(lambda > 0.0) || !(r > 0.0)) {
    throw ParameterError("delta_scaling_root: lambda and r must be > 0");
  }
  if (!(eps > 0.0 && eps < r)) {
    throw ParameterError("delta_scaling_root: eps must lie in (0, r)");
  }
  const double c = -lambda * gamma_fn(1.0 - nu) / std::pow(r, nu + 1.0);
  auto balance = [&](double d) {
    return c * std::pow(r - eps, nu) * std::pow(d, nu - 1.0) * L_eval(1.0 / d) - eps;
  };
  double lo = 0.0, hi = 1.0 - 1e-12;
  if (!(balance(hi) > 0.0)) {
    throw ParameterError("delta_scaling_root: no root in (0, 1); eps too large for this L");
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (balance(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Tail approximation P(Q2 > x) ~= E_{nu-1}(-(Delta x)^{nu-1}).
inline double mittag_leffler_tail_approx(double delta, double nu, double x) {
  if (!(nu > 1.0 && nu < 2.0)) {
    throw ParameterError("mittag_leffler_tail_approx: nu must lie strictly in (1, 2)");
  }
  if (!(delta > 0.0)) throw ParameterError("mittag_leffler_tail_approx: Delta must be > 0");
  if (x < 0.0) throw ParameterError("mittag_leffler_tail_approx: x must be >= 0");
  if (x == 0.0) return 1.0;
  return mittag_leffler(nu - 1.0, -std::pow(delta * x, nu - 1.0));
}

// ---------------------------------------------------------------------------
// Regime I, alpha-stable input: product of Mittag-Leffler LSTs.
// ---------------------------------------------------------------------------

// r/(r + C s1^{alpha-1}) * 1/(1 + C s2^{alpha-1}), C = 1/cos(pi(alpha/2 - 1)).
inline TransformValue regime1_alpha_stable_limit(double alpha, double r, TransformValue s1,
                                                 TransformValue s2) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw ParameterError("regime1_alpha_stable_limit: alpha must lie strictly in (1, 2)");
  }
  if (!(r > 0.0)) throw ParameterError("regime1_alpha_stable_limit: r must be > 0");
  const double c = 1.0 / std::cos(std::numbers::pi * (alpha / 2.0 - 1.0));
  const double beta = alpha - 1.0;
  auto fpow = [&](TransformValue s) {
    if (std::abs(s) == 0.0) return TransformValue(0.0, 0.0);
    return std::pow(s, TransformValue(beta, 0.0));
  };
  TransformValue f1 = TransformValue(r, 0.0) / (TransformValue(r, 0.0) + c * fpow(s1));
  TransformValue f2 = TransformValue(1.0, 0.0) / (TransformValue(1.0, 0.0) + c * fpow(s2));
  return f1 * f2;
}

// ---------------------------------------------------------------------------
// Expansion-order validators.
// ---------------------------------------------------------------------------

struct ExpansionReport {
  std::vector<double> eps;
  std::vector<double> residuals;
  std::vector<double> ratios;  // residual / eps^claimed_order
  double claimed_order = 0.0;
  double fitted_order = 0.0;  // +inf when every residual sits at the rounding floor
  bool below_floor = false;
  bool passed = false;
  std::optional<ExpansionSpec> expansion;
};

namespace detail {

// Least-squares slope of log(residual) vs log(eps), ignoring points at the
// rounding floor; if fewer than 3 informative points remain the expansion is
// declared exact (below_floor).
inline void fit_expansion_order(ExpansionReport& report, double floor) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < report.eps.size(); ++i) {
    if (report.residuals[i] > floor) {
      lx.push_back(std::log(report.eps[i]));
      ly.push_back(std::log(report.residuals[i]));
    }
  }
  if (lx.size() < 3) {
    report.below_floor = true;
    report.fitted_order = std::numeric_limits<double>::infinity();
    report.passed = true;
    return;
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(lx.size());
  my /= double(lx.size());
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  report.fitted_order = sxy / sxx;
  report.passed = report.fitted_order >= report.claimed_order + 0.3;
}

inline std::optional<double> job_third_moment(const JobLaw& jobs) {
  switch (jobs.kind) {
    case JobKind::Exponential: return 6.0 / (jobs.mu * jobs.mu * jobs.mu);
    case JobKind::Deterministic: return jobs.b * jobs.b * jobs.b;
    case JobKind::Pareto:
      if (jobs.nu > 3.0) return jobs.xm * jobs.xm * jobs.xm * jobs.nu / (jobs.nu - 3.0);
      return std::nullopt;
  }
  return std::nullopt;
}

inline std::optional<ExpansionSpec> make_expansion_spec(const LevyModel& model, double r,
                                                        double sigma2) {
  ExpansionSpec spec;
  spec.r = r;
  spec.sigma2 = sigma2;
  spec.eta1 = 3.0;
  spec.eta2 = (spec.eta1 - 1.0) / 2.0;
  if (model.kind == ModelKind::Brownian) {
    spec.k1 = 0.0;  // expansion terminates at s^2
    return spec;
  }
  if (model.kind == ModelKind::CompoundPoisson) {
    if (auto b3 = job_third_moment(model.jobs)) {
      spec.k1 = -model.lambda * *b3 / 6.0;
      return spec;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Validates psi(s eps (r - eps)) = s eps - s eps^2 / r - (sigma2/(2r)) s^2 eps^2
// + o(eps^2) for a fixed finite-variance model with drift r1 = EJ1 + r.
inline ExpansionReport regime1_psi_expansion_check(const LevyModel& model, double r, double s,
                                               const std::vector<double>& eps_seq) {
  auto mm = model_moments(model);
  if (!mm.variance_rate) {
    throw ParameterError("regime1_psi_expansion_check: model must have finite variance");
  }
  if (!(r > 0.0)) throw ParameterError("regime1_psi_expansion_check: r must be > 0");
  if (s < 0.0) throw ParameterError("regime1_psi_expansion_check: s must be >= 0");
  if (eps_seq.size() < 6) {
    throw ParameterError("regime1_psi_expansion_check: need at least 6 geometric eps points");
  }
  const double sigma2 = *mm.variance_rate;
  const double r1 = mm.mean + r;
  ExpansionReport report;
  report.claimed_order = 2.0;
  report.expansion = detail::make_expansion_spec(model, r, sigma2);
  for (double eps : eps_seq) {
    if (!(eps > 0.0 && eps < r)) {
      throw ParameterError("regime1_psi_expansion_check: eps values must lie in (0, r)");
    }
    const double w = s * eps * (r - eps);
    const double psi = detail::psi_upstream(model, r1, w);
    const double predicted =
        s * eps - s * eps * eps / r - (sigma2 / (2.0 * r)) * s * s * eps * eps;
    const double resid = std::abs(psi - predicted);
    report.eps.push_back(eps);
    report.residuals.push_back(resid);
    report.ratios.push_back(resid / (eps * eps));
  }
  detail::fit_expansion_order(report, 1e-15);
  return report;
}

// Validates the Regime II expansion psi(s eps~^2 (gamma-1)) =
// eps~ (-1 + sqrt(1 + 2 s (gamma-1))) + o(eps) after rescaling to unit
// variance (eps~ = eps/sigma); the model drift is eps itself (r1 = EJ1 + eps).
inline ExpansionReport regime2_psi_expansion_check(const LevyModel& model, double gamma, double s,
                                               const std::vector<double>& eps_seq) {
  auto mm = model_moments(model);
  if (!mm.variance_rate) {
    throw ParameterError("regime2_psi_expansion_check: model must have finite variance");
  }
  if (!(gamma > 1.0)) throw ParameterError("regime2_psi_expansion_check: gamma must exceed 1");
  if (s < 0.0) throw ParameterError("regime2_psi_expansion_check: s must be >= 0");
  if (eps_seq.size() < 6) {
    throw ParameterError("regime2_psi_expansion_check: need at least 6 geometric eps points");
  }
  const double sigma2 = *mm.variance_rate;
  const double sigma = std::sqrt(sigma2);
  ExpansionReport report;
  report.claimed_order = 1.0;
  report.expansion = detail::make_expansion_spec(model, 0.0, sigma2);
  const double lead = -1.0 + std::sqrt(1.0 + 2.0 * s * (gamma - 1.0));
  for (double eps : eps_seq) {
    if (!(eps > 0.0)) throw ParameterError("regime2_psi_expansion_check: eps must be > 0");
    const double et = eps / sigma;
    const double w = s * et * et * (gamma - 1.0);
    const double r1 = mm.mean + eps;
    const double psi = detail::psi_upstream(model, r1, w);
    const double resid = std::abs(sigma * psi - et * lead);
    report.eps.push_back(eps);
    report.residuals.push_back(resid);
    report.ratios.push_back(resid / eps);
  }
  detail::fit_expansion_order(report, 1e-15);
  return report;
}

// ---------------------------------------------------------------------------
// Tauberian ratio checks (Pareto chain).
// ---------------------------------------------------------------------------

struct TauberianReport {
  std::vector<double> s;
  std::vector<double> ratio_b;    // (b(s) - 1 + EB s) / (-Gamma(1-nu) s^nu L)
  std::vector<double> ratio_psi;  // (psi(s) - s/r) / (lambda Gamma(1-nu) r^{-(nu+1)} s^nu L)
  bool passed = false;            // both final ratios within 2% of 1
};

inline TauberianReport tauberian_ratio_check(const LevyModel& model, double r1,
                                             const std::vector<double>& s_seq) {
  if (model.kind != ModelKind::CompoundPoisson || model.jobs.kind != JobKind::Pareto) {
    throw ParameterError("tauberian_ratio_check: requires compound Poisson Pareto input");
  }
  const double nu = model.jobs.nu;
  if (!(nu > 1.0 && nu < 2.0)) {
    throw ParameterError("tauberian_ratio_check: nu must lie strictly in (1, 2)");
  }
  if (s_seq.empty()) throw ParameterError("tauberian_ratio_check: empty s sequence");
  for (size_t i = 0; i < s_seq.size(); ++i) {
    if (!(s_seq[i] > 0.0) || (i > 0 && !(s_seq[i] < s_seq[i - 1]))) {
      throw ParameterError("tauberian_ratio_check: s sequence must be positive, decreasing");
    }
  }
  const double r = r1 - model.mean_input;
  if (!(r > 0.0)) throw ParameterError("tauberian_ratio_check: need r1 > mean input");
  const double L = std::pow(model.jobs.xm, nu);
  const double eb = model.jobs.mean();
  const double g1mn = gamma_fn(1.0 - nu);  // negative for nu in (1, 2)
  TauberianReport report;
  for (double s : s_seq) {
    const double b = model.jobs.lst(s);
    const double snu = std::pow(s, nu);
    report.s.push_back(s);
    report.ratio_b.push_back((b - 1.0 + eb * s) / (-g1mn * snu * L));
    const double psi = psi_numeric(model, r1, s);
    report.ratio_psi.push_back((psi - s / r) /
                               (model.lambda * g1mn * snu * L / std::pow(r, nu + 1.0)));
  }
  report.passed = std::abs(report.ratio_b.back() - 1.0) <= 0.02 &&
                  std::abs(report.ratio_psi.back() - 1.0) <= 0.02;
  return report;
}

}  // namespace levytandem

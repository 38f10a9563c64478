#pragma once

// Input-process models for the fluid tandem queue: Laplace exponents phi of
// the net process X = J - r1*t, inverse exponents psi via closed forms
// (Brownian), Cardano's formula (alpha = 3/2 stable), the Takacs busy-period
// fixed point (compound Poisson), and safeguarded Newton root-finding with
// complex continuation. All operations are pure.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "levytandem/errors.hpp"
#include "levytandem/special_functions.hpp"

namespace levytandem {

using TransformValue = std::complex<double>;

enum class ModelKind { Brownian, CompoundPoisson, AlphaStable };
enum class JobKind { Exponential, Pareto, Deterministic };

// Job-size law B for compound Poisson input.
struct JobLaw {
  JobKind kind = JobKind::Exponential;
  double mu = 1.0;        // Exponential rate
  double nu = 1.5;        // Pareto tail index
  double xm = 1.0 / 3.0;  // Pareto scale (left endpoint)
  double b = 1.0;         // Deterministic job size

  static JobLaw exponential(double mu) {
    if (!(mu > 0.0)) throw ParameterError("JobLaw: Exponential rate must be > 0");
    JobLaw j;
    j.kind = JobKind::Exponential;
    j.mu = mu;
    return j;
  }

  // Pareto with P(B > x) = (x / xm)^(-nu) for x >= xm. The default scale
  // xm = (nu-1)/nu is the unique choice with E B = 1.
  static JobLaw pareto(double nu, std::optional<double> scale = std::nullopt) {
    if (!(nu > 1.0)) throw ParameterError("JobLaw: Pareto index must be > 1 (finite mean)");
    JobLaw j;
    j.kind = JobKind::Pareto;
    j.nu = nu;
    j.xm = scale ? *scale : (nu - 1.0) / nu;
    if (!(j.xm > 0.0)) throw ParameterError("JobLaw: Pareto scale must be > 0");
    return j;
  }

  static JobLaw deterministic(double b) {
    if (!(b > 0.0)) throw ParameterError("JobLaw: Deterministic size must be > 0");
    JobLaw j;
    j.kind = JobKind::Deterministic;
    j.b = b;
    return j;
  }

  double mean() const {
    switch (kind) {
      case JobKind::Exponential: return 1.0 / mu;
      case JobKind::Pareto: return xm * nu / (nu - 1.0);
      case JobKind::Deterministic: return b;
    }
    throw ParameterError("JobLaw: unknown kind");
  }

  std::optional<double> second_moment() const {
    switch (kind) {
      case JobKind::Exponential: return 2.0 / (mu * mu);
      case JobKind::Pareto:
        if (nu <= 2.0) return std::nullopt;  // infinite second moment
        return xm * xm * nu / (nu - 2.0);
      case JobKind::Deterministic: return b * b;
    }
    throw ParameterError("JobLaw: unknown kind");
  }

  bool finite_third_moment() const {
    switch (kind) {
      case JobKind::Exponential: return true;
      case JobKind::Pareto: return nu > 3.0;
      case JobKind::Deterministic: return true;
    }
    return false;
  }

  // LST b(s) = E exp(-s B), for real s >= 0 or complex s with Re(s) >= 0.
  // Pareto uses the incomplete-gamma representation
  //   b(s) = nu (xm s)^nu Gamma(-nu, xm s).
  template <class T>
  T lst(T s) const {
    switch (kind) {
      case JobKind::Exponential: return T(mu) / (T(mu) + s);
      case JobKind::Deterministic: return std::exp(-s * T(b));
      case JobKind::Pareto: {
        if (std::abs(s) == 0.0) return T(1.0);
        T z = T(xm) * s;
        return T(nu) * std::pow(z, T(nu)) * upper_inc_gamma(-nu, z);
      }
    }
    throw ParameterError("JobLaw: unknown kind");
  }

  // d/ds b(s). Pareto uses b'(s) = (nu/s) (b(s) - exp(-xm s)).
  template <class T>
  T lst_prime(T s) const {
    switch (kind) {
      case JobKind::Exponential: {
        T d = T(mu) + s;
        return -T(mu) / (d * d);
      }
      case JobKind::Deterministic: return -T(b) * std::exp(-s * T(b));
      case JobKind::Pareto: {
        if (std::abs(s) < 1e-12) return T(-mean());
        return T(nu) / s * (lst(s) - std::exp(-T(xm) * s));
      }
    }
    throw ParameterError("JobLaw: unknown kind");
  }
};

// Description of the input process J (mean rate EJ1 = mean_input).
struct LevyModel {
  ModelKind kind = ModelKind::Brownian;
  double sigma2 = 1.0;      // Brownian variance parameter
  double lambda = 0.0;      // compound Poisson arrival rate
  JobLaw jobs;              // compound Poisson job law
  double alpha = 2.0;       // stable index in (1, 2]
  double mean_input = 1.0;  // E J1

  static LevyModel brownian(double sigma2, double mean_input = 1.0) {
    if (!(sigma2 > 0.0)) throw ParameterError("LevyModel: sigma2 must be > 0");
    if (!(mean_input > 0.0) || !std::isfinite(mean_input)) {
      throw ParameterError("LevyModel: mean input rate must be finite and > 0");
    }
    LevyModel m;
    m.kind = ModelKind::Brownian;
    m.sigma2 = sigma2;
    m.mean_input = mean_input;
    return m;
  }

  static LevyModel compound_poisson(double lambda, JobLaw jobs) {
    if (!(lambda > 0.0)) throw ParameterError("LevyModel: lambda must be > 0");
    LevyModel m;
    m.kind = ModelKind::CompoundPoisson;
    m.lambda = lambda;
    m.jobs = jobs;
    m.mean_input = lambda * jobs.mean();
    return m;
  }

  static LevyModel alpha_stable(double alpha, double mean_input = 1.0) {
    if (!(alpha > 1.0) || alpha > 2.0) {
      throw ParameterError("LevyModel: stable index must lie in (1, 2]");
    }
    if (!(mean_input > 0.0) || !std::isfinite(mean_input)) {
      throw ParameterError("LevyModel: mean input rate must be finite and > 0");
    }
    LevyModel m;
    m.kind = ModelKind::AlphaStable;
    m.alpha = alpha;
    m.mean_input = mean_input;
    return m;
  }

  // Scale constant C = 1/cos(pi (alpha/2 - 1)) of the stable exponent;
  // C -> 1 as alpha -> 2 (Brownian with sigma2 = 2).
  double stable_scale() const {
    return 1.0 / std::cos(std::numbers::pi * (alpha / 2.0 - 1.0));
  }
};

// Aggregate moments of the input process.
struct ModelMoments {
  double mean = 0.0;                     // E J1
  std::optional<double> variance_rate;   // sigma^2 (Var J1 per unit time), if finite
  bool finite_third_moment = false;
};

inline ModelMoments model_moments(const LevyModel& m) {
  ModelMoments out;
  out.mean = m.mean_input;
  switch (m.kind) {
    case ModelKind::Brownian:
      out.variance_rate = m.sigma2;
      out.finite_third_moment = true;
      break;
    case ModelKind::CompoundPoisson:
      if (auto b2 = m.jobs.second_moment()) out.variance_rate = m.lambda * *b2;
      out.finite_third_moment = m.jobs.finite_third_moment();
      break;
    case ModelKind::AlphaStable:
      if (m.alpha == 2.0) out.variance_rate = 2.0;
      out.finite_third_moment = false;
      break;
  }
  return out;
}

namespace detail {

inline void require_positive_rate(double r1) {
  if (!(r1 > 0.0) || !std::isfinite(r1)) {
    throw ParameterError("service rate r1 must be finite and > 0");
  }
}

template <class T>
void require_finite(T v, const char* who) {
  if (!std::isfinite(std::abs(v))) {
    throw DomainError(std::string(who) + ": non-finite result");
  }
}

}  // namespace detail

// Laplace exponent phi(s) = log E exp(-s X_1) of X = J - r1*t.
//   Brownian:          phi(s) = (r1 - EJ1) s + sigma2 s^2 / 2
//   compound Poisson:  phi(s) = s r1 - lambda + lambda b(s)
//   alpha-stable:      phi(s) = (r1 - EJ1) s + C s^alpha
template <class T>
T laplace_exponent(const LevyModel& m, double r1, T s) {
  detail::require_positive_rate(r1);
  T out;
  switch (m.kind) {
    case ModelKind::Brownian:
      out = T(r1 - m.mean_input) * s + T(0.5 * m.sigma2) * s * s;
      break;
    case ModelKind::CompoundPoisson:
      out = s * T(r1) - T(m.lambda) + T(m.lambda) * m.jobs.lst(s);
      break;
    case ModelKind::AlphaStable:
      if (std::abs(s) == 0.0) {
        out = T(0.0);
      } else {
        out = T(r1 - m.mean_input) * s + T(m.stable_scale()) * std::pow(s, T(m.alpha));
      }
      break;
    default:
      throw ParameterError("laplace_exponent: unknown model kind");
  }
  detail::require_finite(out, "laplace_exponent");
  return out;
}

// phi'(s); phi'(0) = r1 - EJ1.
template <class T>
T laplace_exponent_prime(const LevyModel& m, double r1, T s) {
  detail::require_positive_rate(r1);
  switch (m.kind) {
    case ModelKind::Brownian:
      return T(r1 - m.mean_input) + T(m.sigma2) * s;
    case ModelKind::CompoundPoisson:
      return T(r1) + T(m.lambda) * m.jobs.lst_prime(s);
    case ModelKind::AlphaStable:
      if (std::abs(s) == 0.0) return T(r1 - m.mean_input);
      return T(r1 - m.mean_input) +
             T(m.stable_scale() * m.alpha) * std::pow(s, T(m.alpha - 1.0));
  }
  throw ParameterError("laplace_exponent_prime: unknown model kind");
}

// Closed-form inverse exponent for Brownian input:
//   psi(s) = -r/sigma2 + sqrt(r^2/sigma2^2 + 2 s / sigma2), r = r1 - EJ1.
template <class T>
T psi_closed_brownian(const LevyModel& m, double r1, T s) {
  if (m.kind != ModelKind::Brownian) {
    throw ParameterError("psi_closed_brownian: model must be Brownian");
  }
  detail::require_positive_rate(r1);
  const double r = r1 - m.mean_input;
  const double s2 = m.sigma2;
  T arg = T(r * r / (s2 * s2)) + T(2.0 / s2) * s;
  if (std::real(std::complex<double>(arg)) < 0.0 &&
      std::imag(std::complex<double>(arg)) == 0.0) {
    throw NumericError("psi_closed_brownian: branch cut of the square root");
  }
  return T(-r / s2) + std::sqrt(arg);
}

namespace detail {

// Newton iteration for phi(x) = target on the real axis, safeguarded by
// bisection on an expanding bracket [0, hi]. phi is convex and strictly
// increasing for spectrally-positive input with positive drift.
inline double psi_real(const LevyModel& m, double r1, double target, double tol) {
  if (target == 0.0) return 0.0;
  const double r = r1 - m.mean_input;
  double lo = 0.0;
  double hi = 4.0 * target / r;
  for (int i = 0; i < 200 && laplace_exponent(m, r1, hi) < target; ++i) hi *= 2.0;
  double x = target / r;
  if (x > hi) x = 0.5 * hi;
  for (int it = 0; it < 200; ++it) {
    double f = laplace_exponent(m, r1, x) - target;
    if (std::abs(f) <= tol) return x;
    if (f > 0.0) hi = x; else lo = x;
    double fp = laplace_exponent_prime(m, r1, x);
    double step = f / fp;
    double xn = x - step;
    if (!(xn > lo) || !(xn < hi) || !std::isfinite(xn)) xn = 0.5 * (lo + hi);
    x = xn;
  }
  std::ostringstream msg;
  msg << "psi_numeric: no convergence at s = " << target << " (residual "
      << laplace_exponent(m, r1, x) - target << ")";
  throw NumericError(msg.str());
}

}  // namespace detail

// Inverse exponent psi = phi^{-1}. Real s >= 0: safeguarded Newton. Complex s:
// analytic continuation along the straight segment from the real anchor |s|
// in at most 64 steps, Newton at each step.
inline double psi_numeric(const LevyModel& m, double r1, double s) {
  detail::require_positive_rate(r1);
  if (!(r1 - m.mean_input > 0.0)) {
    throw ParameterError("psi_numeric: requires positive drift r1 - EJ1 > 0");
  }
  if (s < 0.0) throw DomainError("psi_numeric: requires s >= 0 on the real axis");
  const double tol = 1e-13 * (1.0 + std::abs(s));
  return detail::psi_real(m, r1, s, tol);
}

inline TransformValue psi_numeric(const LevyModel& m, double r1, TransformValue s) {
  detail::require_positive_rate(r1);
  if (!(r1 - m.mean_input > 0.0)) {
    throw ParameterError("psi_numeric: requires positive drift r1 - EJ1 > 0");
  }
  if (s.imag() == 0.0 && s.real() >= 0.0) {
    return TransformValue(psi_numeric(m, r1, s.real()), 0.0);
  }
  const double anchor = std::abs(s);
  const double tol = 1e-13 * (1.0 + anchor);
  TransformValue x(detail::psi_real(m, r1, anchor, tol), 0.0);
  for (int steps = 8; steps <= 64; steps *= 2) {
    TransformValue xs = x;
    bool ok = true;
    for (int j = 1; j <= steps && ok; ++j) {
      TransformValue zj = TransformValue(anchor) +
                          (s - TransformValue(anchor)) * (double(j) / steps);
      ok = false;
      for (int it = 0; it < 30; ++it) {
        TransformValue f = laplace_exponent(m, r1, xs) - zj;
        if (std::abs(f) <= tol) {
          ok = true;
          break;
        }
        TransformValue fp = laplace_exponent_prime(m, r1, xs);
        if (std::abs(fp) == 0.0) break;
        xs -= f / fp;
        if (!std::isfinite(std::abs(xs))) break;
      }
    }
    if (ok && std::abs(laplace_exponent(m, r1, xs) - s) <= 10.0 * tol) return xs;
  }
  std::ostringstream msg;
  msg << "psi_numeric: continuation failed at s = " << s.real() << " + " << s.imag() << "i";
  throw NumericError(msg.str());
}

// Inverse exponent for the alpha = 3/2 stable exponent phi(u) = r u + sqrt(2) u^{3/2}
// by Cardano's formula, with
//   R(s) = -r^3/(54 sqrt(2)) + sqrt(s^2/8 - s r^3/108) + s/(2 sqrt(2))
//   psi(s) = (R^{1/3} + r^2/(18 R^{1/3}) - r/(3 sqrt(2)))^2 .
// All radicals on principal branches in complex arithmetic. Near R = 0 the
// formula loses precision and the root-finder takes over.
inline TransformValue psi_cardano_three_halves(double r, TransformValue s) {
  if (!(r > 0.0)) throw ParameterError("psi_cardano_three_halves: drift r must be > 0");
  if (std::abs(s) == 0.0) return TransformValue(0.0, 0.0);
  const double sqrt2 = std::numbers::sqrt2;
  const double r3 = r * r * r;
  TransformValue R = TransformValue(-r3 / (54.0 * sqrt2)) +
                     std::sqrt(s * s / 8.0 - s * (r3 / 108.0)) + s / (2.0 * sqrt2);
  if (std::abs(R) < 1e-8 * std::max(1.0, r3)) {
    // Fall back to root-finding on the same exponent (drift r, mean 1, r1 = r + 1).
    LevyModel stable = LevyModel::alpha_stable(1.5, 1.0);
    return psi_numeric(stable, r + 1.0, s);
  }
  TransformValue c = std::pow(R, 1.0 / 3.0);
  TransformValue root = c + TransformValue(r * r / 18.0) / c - TransformValue(r / (3.0 * sqrt2));
  TransformValue psi = root * root;
  if (std::imag(s) == 0.0 && std::abs(psi.imag()) <= 1e-9) {
    psi = TransformValue(psi.real(), 0.0);  // drop rounding-level imaginary part
  }
  return psi;
}

// Busy-period LST pi(s) for compound Poisson input served at rate r1, as the
// fixed point of the Takacs functional equation
//   pi(s) = b((lambda - lambda pi(s) + s) / r1),
// iterated from pi_0 = 0 (a contraction for s >= 0 under rho1 < 1).
inline double busy_period_lst(const LevyModel& m, double r1, double s) {
  if (m.kind != ModelKind::CompoundPoisson) {
    throw ParameterError("busy_period_lst: model must be compound Poisson");
  }
  detail::require_positive_rate(r1);
  if (s < 0.0) throw DomainError("busy_period_lst: requires s >= 0");
  if (!(m.mean_input < r1)) {
    throw ParameterError("busy_period_lst: requires rho1 = lambda E B / r1 < 1");
  }
  double pi = 0.0;
  for (int it = 0; it < 10000; ++it) {
    double next = m.jobs.lst((m.lambda - m.lambda * pi + s) / r1);
    if (std::abs(next - pi) <= 1e-13) return next;
    pi = next;
  }
  std::ostringstream msg;
  msg << "busy_period_lst: fixed point not reached at s = " << s;
  throw NumericError(msg.str());
}

// psi reconstructed from the busy-period LST: psi(s) = (lambda - lambda pi(s) + s)/r1.
inline double psi_via_busy_period(const LevyModel& m, double r1, double s) {
  return (m.lambda - m.lambda * busy_period_lst(m, r1, s) + s) / r1;
}

// Service-rate parametrizations. Stability requires EJ1 < r2 < r1.
struct TandemParams {
  enum class Mode { Direct, RegimeI, RegimeII };

  double r1 = 0.0;
  double r2 = 0.0;
  Mode mode = Mode::Direct;
  // Derived quantities (EJ1 denoted mean):
  double r = 0.0;      // r1 - mean
  double eps = 0.0;    // r2 - mean
  double gamma = 0.0;  // r / eps
  double rho1 = 0.0;   // mean / r1
  double rho2 = 0.0;   // mean / r2

  static TandemParams direct(double r1, double r2, double mean) {
    return make(r1, r2, mean, Mode::Direct);
  }
  // r1 = mean + r, r2 = mean + eps with r fixed as eps -> 0.
  static TandemParams regime1(double r, double eps, double mean) {
    return make(mean + r, mean + eps, mean, Mode::RegimeI);
  }
  // r1 = mean + gamma*eps, r2 = mean + eps with gamma > 1 fixed.
  static TandemParams regime2(double gamma, double eps, double mean) {
    if (!(gamma > 1.0)) {
      throw ParameterError("TandemParams: RegimeII requires gamma > 1");
    }
    return make(mean + gamma * eps, mean + eps, mean, Mode::RegimeII);
  }
  static TandemParams from_loads(double rho1, double rho2, double mean) {
    if (!(rho1 > 0.0) || rho1 >= 1.0 || !(rho2 > 0.0) || rho2 >= 1.0) {
      throw ParameterError("TandemParams: loads must lie in (0, 1)");
    }
    return make(mean / rho1, mean / rho2, mean, Mode::Direct);
  }

 private:
  static TandemParams make(double r1, double r2, double mean, Mode mode) {
    if (!(mean > 0.0)) throw ParameterError("TandemParams: mean input must be > 0");
    if (!(r2 < r1)) {
      throw ParameterError("TandemParams: requires r2 < r1 (otherwise the downstream queue is empty)");
    }
    if (!(mean < r2)) {
      throw ParameterError("TandemParams: stability requires EJ1 < r2");
    }
    TandemParams p;
    p.r1 = r1;
    p.r2 = r2;
    p.mode = mode;
    p.r = r1 - mean;
    p.eps = r2 - mean;
    p.gamma = p.r / p.eps;
    p.rho1 = mean / r1;
    p.rho2 = mean / r2;
    return p;
  }
};

}  // namespace levytandem

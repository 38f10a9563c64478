#pragma once

// Gamma function (Lanczos), upper incomplete gamma for real orders including
// negative non-integers, complementary error function, and the one-parameter
// Mittag-Leffler function E_alpha(z) for alpha in (0,1] and z <= 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "levytandem/errors.hpp"

namespace levytandem {

namespace detail {

// sin(pi*x) with argument reduction to [-1/2, 1/2] (keeps accuracy for large
// |x| and returns exact zeros at integers, which callers rely on to detect
// structural zeros at gamma-function poles).
inline double sinpi(double x) {
  double r = std::fmod(x, 2.0);
  double n = std::floor(r + 0.5);
  double s = std::sin(std::numbers::pi * (r - n));
  return (std::fmod(n, 2.0) == 0.0) ? s : -s;
}

inline long double sinpi_ld(long double x) {
  long double r = std::fmod(x, 2.0L);
  long double n = std::floor(r + 0.5L);
  long double s = std::sin(std::numbers::pi_v<long double> * (r - n));
  return (std::fmod(n, 2.0L) == 0.0L) ? s : -s;
}

}  // namespace detail

// Gamma function for real non-pole arguments: Lanczos approximation (g = 7,
// 9 coefficients) with the reflection formula for x < 0.5.
inline double gamma_fn(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma_fn: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) {
    std::ostringstream msg;
    msg << "gamma_fn: pole at non-positive integer x = " << x;
    throw DomainError(msg.str());
  }
  if (x < 0.5) {
    return std::numbers::pi / (detail::sinpi(x) * gamma_fn(1.0 - x));
  }
  static const double c[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,    12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  const double g = 7.0;
  double z = x - 1.0;
  double a = c[0];
  for (int i = 1; i < 9; ++i) a += c[i] / (z + i);
  double t = z + g + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

// Complementary error function. Thin wrapper so callers stay within this
// library's namespace; doubles as an independent oracle for E_{1/2}.
inline double erfc_fn(double x) { return std::erfc(x); }

namespace detail {

// Lower incomplete gamma by series, valid for a > 0 and |z| < ~a+1.
// Returns gamma(a,z) (the lower function).
template <class T>
T lower_inc_gamma_series(double a, T z) {
  T sum = T(1.0 / a);
  T term = sum;
  for (int n = 1; n < 600; ++n) {
    term *= z / T(a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return std::pow(z, T(a)) * std::exp(-z) * sum;
}

// Upper incomplete gamma by continued fraction (modified Lentz), valid for
// a real and Re(z) > 0 with |z| >= ~a+1.
template <class T>
T upper_inc_gamma_cf(double a, T z) {
  const double fpmin = std::numeric_limits<double>::min() / 1e-30;
  T b = z + T(1.0 - a);
  T c = T(1.0 / fpmin);
  T d = T(1.0) / b;
  T h = d;
  for (int i = 1; i < 600; ++i) {
    double an = -i * (i - a);
    b += T(2.0);
    d = T(an) * d + b;
    if (std::abs(d) < fpmin) d = T(fpmin);
    c = b + T(an) / c;
    if (std::abs(c) < fpmin) c = T(fpmin);
    d = T(1.0) / d;
    T del = d * c;
    h *= del;
    if (std::abs(del - T(1.0)) < 1e-17) break;
  }
  return std::exp(-z) * std::pow(z, T(a)) * h;
}

}  // namespace detail

// Upper incomplete gamma Gamma(a, z) for real a (non-positive integers
// excluded) and Re(z) > 0. Negative non-integer orders use the downward
// recurrence Gamma(b-1,z) = (Gamma(b,z) - z^{b-1} e^{-z})/(b-1) from an
// order in (0, 1].
template <class T>
T upper_inc_gamma(double a, T z) {
  if (!(std::abs(z) > 0.0)) {
    if (a > 0.0) return T(gamma_fn(a));
    throw DomainError("upper_inc_gamma: divergent at z = 0 for a <= 0");
  }
  if (std::real(std::complex<double>(z)) <= 0.0 && std::imag(std::complex<double>(z)) == 0.0) {
    throw DomainError("upper_inc_gamma: requires Re(z) > 0");
  }
  if (a <= 0.0 && a == std::floor(a)) {
    throw ParameterError("upper_inc_gamma: non-positive integer order unsupported");
  }
  int m = 0;
  double b0 = a;
  if (a <= 0.0) {
    m = static_cast<int>(std::floor(-a)) + 1;
    b0 = a + m;  // in (0, 1]
  }
  T g = (std::abs(z) < b0 + 1.0) ? T(gamma_fn(b0)) - detail::lower_inc_gamma_series(b0, z)
                                 : detail::upper_inc_gamma_cf(b0, z);
  for (int j = 0; j < m; ++j) {
    double b = b0 - j;
    g = (g - std::pow(z, T(b - 1.0)) * std::exp(-z)) / T(b - 1.0);
  }
  return g;
}

namespace detail {

struct MlBranchValue {
  long double value;
  long double err_est;  // absolute error estimate
};

// Power series sum_{n>=0} z^n / Gamma(alpha n + 1), accumulated in long
// double. Each term comes from exp(n log|z| - lgamma(a n + 1)); both factors
// carry ~ulp relative error on an exponent of magnitude |expo|, so the
// per-term error scales with |t| * |expo| * eps, not with eps alone - that
// amplification dominates the estimate once cancellation is severe.
inline MlBranchValue ml_series(double alpha, double z) {
  const long double a = alpha;
  const long double az = std::abs((long double)z);
  long double sum = 1.0L, err = 0.0L;
  if (az > 0.0L) {
    const long double lz = std::log(az);
    for (int n = 1; n < 500; ++n) {
      const long double expo = n * lz - std::lgamma(a * n + 1.0L);
      long double t = std::exp(expo);
      if (z < 0.0 && (n & 1)) t = -t;
      sum += t;
      err += std::abs(t) * (std::abs(expo) + 4.0L) * 1e-18L;
      if (std::abs(t) < 1e-22L && n * a > az) break;
    }
  }
  return {sum, err + 1e-18L};
}

// Asymptotic expansion -sum_{k>=1} z^{-k} / Gamma(1 - alpha k) for z -> -inf,
// summed to the smallest term; error estimate is the first omitted term.
// Terms are computed via the reflection formula to avoid overflow.
inline MlBranchValue ml_asymptotic(double alpha, double z) {
  const long double a = alpha;
  const long double az = -(long double)z;  // z < 0
  const long double laz = std::log(az);
  const long double pi_ld = std::numbers::pi_v<long double>;
  long double sum = 0.0L, prev = std::numeric_limits<long double>::max();
  long double omitted = std::numeric_limits<long double>::max();
  for (int k = 1; k < 400; ++k) {
    // -z^{-k}/Gamma(1-ak) with z^{-k} = (-1)^k az^{-k} and
    // 1/Gamma(1-ak) = sin(pi a k) Gamma(a k) / pi. A sine at rounding
    // distance from zero marks a structural zero of the coefficient at a
    // gamma pole (a*k near an integer, up to the representation error of
    // a); it must be skipped, not mistaken for series convergence.
    long double s = sinpi_ld(a * k);
    if (std::abs(s) <= 1e-14L * k) continue;
    long double mag = std::exp(std::lgamma(a * k) - k * laz) / pi_ld;
    long double t = -mag * s;
    if (k & 1) t = -t;  // times (-1)^k ... combined with leading minus below
    // note: t currently equals -(-1)^k az^{-k} sin(pi a k) Gamma(ak)/pi
    long double at = std::abs(t);
    if (at >= prev) {
      omitted = at;
      break;
    }
    sum += t;
    prev = at;
    omitted = at;  // if the loop exhausts, last added term bounds the tail
    if (at < 1e-22L) break;
  }
  return {sum, omitted + 1e-19L};
}

// Tanh-sinh (Takahasi-Mori double-exponential) quadrature on [a, b]. The
// change of variable x = mid + half*tanh((pi/2) sinh(t)) pushes algebraic
// endpoint singularities (e.g. the u^{1/alpha} behaviour of the integrand
// below) into a double-exponentially decaying trapezoid sum, so the step
// halving converges near machine precision regardless of endpoint smoothness.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double pi_half = 0.5 * std::numbers::pi;
  auto level_sum = [&](double h) {
    double acc = 0.0;
    for (int k = 0;; ++k) {
      const double t = k * h;
      const double ch = std::cosh(pi_half * std::sinh(t));
      const double w = pi_half * std::cosh(t) / (ch * ch);
      if (w < 1e-18 && k > 2) break;
      const double d = half * std::tanh(pi_half * std::sinh(t));
      const double term = w * (k == 0 ? f(mid) : f(mid + d) + f(mid - d));
      acc += term;
      if (k > 700) break;  // unreachable for sane h; guards non-finite input
    }
    return acc * h * half;
  };
  double h = 1.0;
  double prev = level_sum(h);
  for (int level = 0; level < 10; ++level) {
    h *= 0.5;
    const double cur = level_sum(h);
    if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

// Integral representation on the negative axis for alpha in (0, 1):
//   E_alpha(-x) = sin(alpha pi)/(alpha pi) *
//                 Int_0^inf exp(-(u x)^(1/alpha)) / (u^2 + 2 u cos(alpha pi) + 1) du
// (substitution u = r^alpha concentrates the mass near the origin; the
// remaining fractional-power behaviour at u = 0 is handled by tanh_sinh).
inline double ml_integral(double alpha, double x) {
  const double ca = std::cos(std::numbers::pi * alpha);
  const double inv_alpha = 1.0 / alpha;
  auto f = [&](double u) {
    double e = std::pow(u * x, inv_alpha);
    if (e > 700.0) return 0.0;
    return std::exp(-e) / (u * u + 2.0 * ca * u + 1.0);
  };
  double upper = std::pow(50.0, alpha) / x;  // beyond this the exponent is < e^-50
  double split = std::min(1.0, upper);
  double v = tanh_sinh(f, 0.0, split, 1e-14);
  if (upper > split) v += tanh_sinh(f, split, upper, 1e-14);
  return v * detail::sinpi(alpha) / (alpha * std::numbers::pi);
}

}  // namespace detail

// One-parameter Mittag-Leffler function E_alpha(z) for alpha in (0, 1] and
// z <= 0. Power series for small |z|, asymptotic expansion for large |z|, and
// the integral representation as arbiter in the crossover band where the two
// branches disagree.
inline double mittag_leffler(double alpha, double z) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw ParameterError("mittag_leffler: alpha must lie in (0, 1]");
  }
  if (z > 1e-14) throw ParameterError("mittag_leffler: requires z <= 0");
  if (z > 0.0) z = 0.0;
  if (z == 0.0) return 1.0;
  if (alpha == 1.0) return std::exp(z);

  const double az = -z;
  const double tol = 1e-10;
  double value;
  if (az <= 3.0) {
    auto s = detail::ml_series(alpha, z);
    value = (s.err_est <= tol) ? (double)s.value : detail::ml_integral(alpha, az);
  } else if (az >= 9.0) {
    auto a = detail::ml_asymptotic(alpha, z);
    if (a.err_est <= tol) {
      value = (double)a.value;
    } else {
      auto s = detail::ml_series(alpha, z);
      value = (s.err_est <= tol) ? (double)s.value : detail::ml_integral(alpha, az);
    }
  } else {
    // Crossover band: accept agreeing branches, otherwise integrate.
    auto s = detail::ml_series(alpha, z);
    auto a = detail::ml_asymptotic(alpha, z);
    if (std::abs(s.value - a.value) <= 1e-9 && std::min(s.err_est, a.err_est) <= tol) {
      value = (double)((az <= 5.0) ? s.value : a.value);
    } else if (s.err_est <= tol && s.err_est <= a.err_est) {
      value = (double)s.value;
    } else if (a.err_est <= tol) {
      value = (double)a.value;
    } else {
      value = detail::ml_integral(alpha, az);
    }
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace levytandem

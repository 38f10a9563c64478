#pragma once

// Numerical Laplace-transform inversion of workload LSTs to tail
// probabilities P(Q > x), working on the transform of the complementary
// CDF, (1 - lst(s))/s. Two methods: Abate-Whitt Euler summation (default,
// complex contour) and Gaver-Stehfest (real axis, independent cross-check).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "levytandem/errors.hpp"
#include "levytandem/levy_models.hpp"

namespace levytandem {

using TransformFn = std::function<TransformValue(TransformValue)>;

enum class InversionMethod { EulerSummation, GaverStehfest };

struct InversionConfig {
  InversionMethod method = InversionMethod::EulerSummation;
  // Estimated-truncation-error budget for Euler summation; the
  // discretization error e^{-A} is reported separately.
  double target_accuracy = 1e-8;
  double euler_discretization_a = 18.420680743952367;  // 8 ln 10 -> e^{-A} = 1e-8
  int euler_truncation = 40;                           // N base terms
  int euler_smoothing = 15;                            // M binomial-smoothing terms
  int stehfest_terms = 14;                             // even, <= 18 in double precision

  void validate() const {
    if (!(target_accuracy >= 1e-10)) {
      throw ParameterError("InversionConfig: target_accuracy must be >= 1e-10");
    }
    if (!(euler_discretization_a > 0.0) || euler_truncation < 1 || euler_smoothing < 1) {
      throw ParameterError("InversionConfig: Euler parameters must be positive");
    }
    if (stehfest_terms < 2 || stehfest_terms > 18 || stehfest_terms % 2 != 0) {
      throw ParameterError("InversionConfig: Stehfest term count must be even and in [2, 18]");
    }
  }
};

// Ordered tail curve tagged with the method that produced it (exact-inverted /
// regime1 / regime2 / mittag-leffler / simulated) and optional per-point 95%
// half-widths.
struct TailCurve {
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> half_width;  // empty unless the source is stochastic
  std::string method;
  std::vector<std::string> warnings;
};

struct InvertOutcome {
  double value = 0.0;       // clamped to [0, 1]
  double raw = 0.0;         // pre-clamp value
  bool clamped = false;
  double error_estimate = 0.0;  // Euler only; 0 for Gaver-Stehfest
};

namespace detail {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Gaver-Stehfest weights for an even term count n <= 18. Factorials up to
// 18! are exact in long double, so the alternating sum is computed directly.
inline std::vector<double> stehfest_weights(int n) {
  auto fact = [](int k) {
    long double f = 1.0L;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  const int half = n / 2;
  std::vector<double> v(size_t(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    long double sum = 0.0L;
    for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
      long double term = std::pow((long double)j, half) * fact(2 * j) /
                         (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) *
                          fact(2 * j - k));
      sum += term;
    }
    long double sign = ((k + half) % 2 == 0) ? 1.0L : -1.0L;
    v[size_t(k)] = double(sign * sum);
  }
  return v;
}

inline double euler_invert_ccdf(const TransformFn& lst, double x,
                                const InversionConfig& cfg, double& error_estimate) {
  const double a = cfg.euler_discretization_a;
  const int n = cfg.euler_truncation;
  const int m = cfg.euler_smoothing;
  const double b = a / (2.0 * x);

  auto ccdf_re = [&](double im) {
    TransformValue s(b, im);
    TransformValue f = (TransformValue(1.0, 0.0) - lst(s)) / s;
    if (!std::isfinite(f.real()) || !std::isfinite(f.imag())) {
      std::ostringstream msg;
      msg << "invert_tail: transform evaluation returned non-finite value at s = ("
          << s.real() << ", " << s.imag() << ")";
      throw NumericError(msg.str());
    }
    return f.real();
  };

  double sum = 0.5 * ccdf_re(0.0);
  for (int k = 1; k <= n; ++k) {
    sum += ((k % 2 != 0) ? -1.0 : 1.0) * ccdf_re(k * kPi / x);
  }
  // Partial sums s_n .. s_{n+m} feeding the binomial (Euler) smoothing.
  std::vector<double> partial(size_t(m) + 1);
  partial[0] = sum;
  for (int j = 1; j <= m; ++j) {
    sum += (((n + j) % 2 != 0) ? -1.0 : 1.0) * ccdf_re((n + j) * kPi / x);
    partial[size_t(j)] = sum;
  }

  auto smoothed = [&](int order, int offset) {
    double acc = 0.0;
    double binom = 1.0;  // C(order, 0)
    for (int j = 0; j <= order; ++j) {
      acc += binom * partial[size_t(j + offset)];
      binom = binom * double(order - j) / double(j + 1);
    }
    return std::ldexp(acc, -order);
  };

  const double scale = std::exp(a / 2.0) / x;
  const double e_m = smoothed(m, 0);
  const double e_m1 = smoothed(m - 1, 1);  // same evaluations, order m-1
  const double trunc_est = scale * std::abs(e_m - e_m1);
  if (trunc_est > 10.0 * cfg.target_accuracy) {
    std::ostringstream msg;
    msg << "invert_tail: Euler summation did not converge at x = " << x
        << " (truncation estimate " << trunc_est << " > 10 * target "
        << cfg.target_accuracy << "; last partial sums " << partial[size_t(m) - 1]
        << ", " << partial[size_t(m)] << ")";
    throw NumericError(msg.str());
  }
  error_estimate = trunc_est + std::exp(-a);
  return scale * e_m;
}

inline double stehfest_invert_ccdf(const TransformFn& lst, double x,
                                   const InversionConfig& cfg) {
  static const double kLn2 = 0.69314718055994530942;
  const std::vector<double> v = stehfest_weights(cfg.stehfest_terms);
  double acc = 0.0;
  for (int k = 1; k <= cfg.stehfest_terms; ++k) {
    double s = k * kLn2 / x;
    TransformValue f = (TransformValue(1.0, 0.0) - lst(TransformValue(s, 0.0))) /
                       TransformValue(s, 0.0);
    if (!std::isfinite(f.real())) {
      std::ostringstream msg;
      msg << "invert_tail: transform evaluation returned non-finite value at s = " << s;
      throw NumericError(msg.str());
    }
    acc += v[size_t(k)] * f.real();
  }
  return acc * kLn2 / x;
}

}  // namespace detail

// Inverts the complementary-CDF transform of `lst` at x > 0, returning the
// probability clamped to [0, 1] with the clamping flagged.
inline InvertOutcome invert_tail_checked(const TransformFn& lst, double x,
                                         const InversionConfig& cfg = {}) {
  cfg.validate();
  if (!(x > 0.0)) throw ParameterError("invert_tail: x must be positive");
  InvertOutcome out;
  if (cfg.method == InversionMethod::EulerSummation) {
    out.raw = detail::euler_invert_ccdf(lst, x, cfg, out.error_estimate);
  } else {
    out.raw = detail::stehfest_invert_ccdf(lst, x, cfg);
    out.error_estimate = 0.0;  // no internal estimate; documented <= 1e-4 cross-check
  }
  out.value = std::min(1.0, std::max(0.0, out.raw));
  out.clamped = (out.value != out.raw);
  return out;
}

inline double invert_tail(const TransformFn& lst, double x,
                          const InversionConfig& cfg = {}) {
  return invert_tail_checked(lst, x, cfg).value;
}

// Batch inversion over a strictly increasing positive grid. Per-point
// failures are collected as warnings (p = NaN) and are fatal only if every
// point fails; monotonicity violations beyond the accuracy budget attach
// warnings.
inline TailCurve tail_curve(const TransformFn& lst, const std::vector<double>& xs,
                            const InversionConfig& cfg = {},
                            std::string method = "exact-inverted") {
  cfg.validate();
  if (xs.empty()) throw ParameterError("tail_curve: empty x grid");
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || (i > 0 && !(xs[i] > xs[i - 1]))) {
      throw ParameterError("tail_curve: xs must be strictly increasing and positive");
    }
  }
  TailCurve curve;
  curve.x = xs;
  curve.p.assign(xs.size(), std::numeric_limits<double>::quiet_NaN());
  curve.method = std::move(method);
  size_t failures = 0;
  std::string first_failure;
  for (size_t i = 0; i < xs.size(); ++i) {
    try {
      InvertOutcome out = invert_tail_checked(lst, xs[i], cfg);
      curve.p[i] = out.value;
      if (out.clamped && std::abs(out.raw - out.value) > 10.0 * cfg.target_accuracy) {
        std::ostringstream w;
        w << "clamped p(" << xs[i] << ") from " << out.raw;
        curve.warnings.push_back(w.str());
      }
    } catch (const std::exception& e) {
      ++failures;
      if (first_failure.empty()) first_failure = e.what();
      std::ostringstream w;
      w << "inversion failed at x = " << xs[i] << ": " << e.what();
      curve.warnings.push_back(w.str());
    }
  }
  if (failures == xs.size()) {
    throw NumericError("tail_curve: all points failed; first error: " + first_failure);
  }
  const double slack = (cfg.method == InversionMethod::EulerSummation)
                           ? 100.0 * cfg.target_accuracy
                           : 1e-3;
  for (size_t i = 1; i < xs.size(); ++i) {
    if (std::isfinite(curve.p[i]) && std::isfinite(curve.p[i - 1]) &&
        curve.p[i] > curve.p[i - 1] + slack) {
      std::ostringstream w;
      w << "monotonicity violation: p(" << xs[i] << ") = " << curve.p[i] << " > p("
        << xs[i - 1] << ") = " << curve.p[i - 1];
      curve.warnings.push_back(w.str());
    }
  }
  return curve;
}

}  // namespace levytandem

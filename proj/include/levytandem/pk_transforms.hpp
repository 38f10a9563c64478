#pragma once

// Exact stationary-workload Laplace-Stieltjes transforms of the two-node
// fluid tandem: upstream marginal (generalized Pollaczek-Khinchine), joint
// two-dimensional transform, and downstream marginal. Pure functions.

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>

#include "levytandem/errors.hpp"
#include "levytandem/levy_models.hpp"

namespace levytandem {

// Input process plus service rates; stability EJ1 < r2 < r1 is enforced by
// TandemParams, consistency of the mean is enforced here.
struct TandemSystem {
  LevyModel model;
  TandemParams params;

  TandemSystem(LevyModel m, TandemParams p) : model(std::move(m)), params(p) {
    if (std::abs((params.r1 - model.mean_input) - params.r) > 1e-12 * (1.0 + params.r1)) {
      throw ParameterError(
          "TandemSystem: TandemParams were derived with a different mean input rate");
    }
  }
};

namespace detail {

// psi of the upstream net process, choosing the closed form when available.
template <class T>
T psi_upstream(const LevyModel& m, double r1, T w) {
  if (m.kind == ModelKind::Brownian) return psi_closed_brownian(m, r1, w);
  return psi_numeric(m, r1, w);
}

inline double psi_upstream(const LevyModel& m, double r1, double w) {
  if (m.kind == ModelKind::Brownian) {
    return psi_closed_brownian(m, r1, TransformValue(w, 0.0)).real();
  }
  return psi_numeric(m, r1, w);
}

// 4-point Richardson (Neville) extrapolation of g(h) to h = 0 using
// h0, h0/2, h0/4, h0/8.
template <class T>
T richardson_limit(const std::function<T(double)>& g, double h0) {
  double h[4];
  T v[4];
  for (int i = 0; i < 4; ++i) {
    h[i] = h0 / double(1 << i);
    v[i] = g(h[i]);
  }
  for (int level = 1; level < 4; ++level) {
    for (int i = 0; i < 4 - level; ++i) {
      v[i] = v[i + 1] + (v[i + 1] - v[i]) * (h[i + level] / (h[i] - h[i + level]));
    }
  }
  return v[0];
}

}  // namespace detail

// Upstream workload LST: E exp(-s Q1) = s phi'(0) / phi(s), phi'(0) = r1 - EJ1.
template <class T>
T lst_upstream(const TandemSystem& sys, T s) {
  if (std::abs(s) == 0.0) return T(1.0);
  T phi = laplace_exponent(sys.model, sys.params.r1, s);
  if (std::abs(phi) < 1e-13 * std::abs(s) * sys.params.r) {
    std::ostringstream msg;
    msg << "lst_upstream: phi vanishes at s != 0 (|s| = " << std::abs(s) << ")";
    throw NumericError(msg.str());
  }
  return s * T(sys.params.r) / phi;
}

// Joint workload LST:
//   E exp(-s1 Q1 - s2 Q2) =
//     [eps s2 / (s2 - psi(s2 dr))] * [(psi(s2 dr) - s1) / (dr s2 - phi(s1))],
// with dr = r1 - r2 and eps = r2 - EJ1 (= -E X1 of the downstream net
// process). On the curve dr*s2 = phi(s1) the second factor is a removable
// 0/0; it is evaluated by a 4-point Richardson limit along real
// perturbations of s1.
template <class T>
T lst_joint(const TandemSystem& sys, T s1, T s2) {
  const double dr = sys.params.r1 - sys.params.r2;
  const double eps = sys.params.eps;
  if (std::abs(s2) == 0.0) return lst_upstream(sys, s1);

  T p = detail::psi_upstream(sys.model, sys.params.r1, T(dr) * s2);
  T den1 = s2 - p;
  if (std::abs(den1) < 1e-13 * (1.0 + std::abs(s2))) {
    std::ostringstream msg;
    msg << "lst_joint: non-removable vanishing denominator s2 - psi(s2 dr) at |s2| = "
        << std::abs(s2);
    throw NumericError(msg.str());
  }
  T factor1 = T(eps) * s2 / den1;

  T phi1 = laplace_exponent(sys.model, sys.params.r1, s1);
  T den2 = T(dr) * s2 - phi1;
  if (std::abs(den2) <= 1e-8 * (1.0 + std::abs(T(dr) * s2) + std::abs(phi1))) {
    // Removable singularity: psi(dr s2) = s1 exactly when dr s2 = phi(s1).
    const double h0 = 1e-3 * (1.0 + std::abs(s1));
    std::function<T(double)> g = [&](double h) {
      T s1h = s1 + T(h);
      return (p - s1h) / (T(dr) * s2 - laplace_exponent(sys.model, sys.params.r1, s1h));
    };
    return factor1 * detail::richardson_limit(g, h0);
  }
  return factor1 * (p - s1) / den2;
}

// Downstream workload LST: E exp(-s Q2) = (eps/dr) psi(s dr) / (s - psi(s dr)).
template <class T>
T lst_downstream(const TandemSystem& sys, T s) {
  if (std::abs(s) == 0.0) return T(1.0);
  const double dr = sys.params.r1 - sys.params.r2;
  const double eps = sys.params.eps;
  T p = detail::psi_upstream(sys.model, sys.params.r1, T(dr) * s);
  T den = s - p;
  if (std::abs(den) < 1e-13 * (1.0 + std::abs(s))) {
    std::ostringstream msg;
    msg << "lst_downstream: vanishing denominator s - psi(s dr) at |s| = " << std::abs(s);
    throw NumericError(msg.str());
  }
  return T(eps / dr) * p / den;
}

}  // namespace levytandem

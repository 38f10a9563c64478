#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "levytandem/laplace_inversion.hpp"
#include "levytandem/levy_models.hpp"
#include "levytandem/pk_transforms.hpp"
#include "levytandem/special_functions.hpp"

using namespace levytandem;
using Catch::Matchers::WithinAbs;
using C = TransformValue;

namespace {

const TransformFn kExpLst = [](C s) { return C(1.0, 0.0) / (C(1.0, 0.0) + s); };

InversionConfig stehfest_cfg() {
  InversionConfig cfg;
  cfg.method = InversionMethod::GaverStehfest;
  return cfg;
}

}  // namespace

TEST_CASE("Euler inversion of the exponential tail") {
  CHECK_THAT(invert_tail(kExpLst, 1.0), WithinAbs(std::exp(-1.0), 1e-8));
  auto out = invert_tail_checked(kExpLst, 1.0);
  CHECK(out.error_estimate <= 2e-8);
  CHECK_FALSE(out.clamped);
}

TEST_CASE("Gaver-Stehfest inversion of the exponential tail") {
  CHECK_THAT(invert_tail(kExpLst, 1.0, stehfest_cfg()), WithinAbs(std::exp(-1.0), 1e-5));
}

TEST_CASE("Stehfest weight generator reproduces the frozen n = 14 table") {
  // Frozen from exact rational arithmetic.
  const std::vector<double> expected = {
      0.002777777777777778, -6.402777777777778,  924.05,
      -34597.927777777775,  540321.1111111111,   -4398346.366666666,
      21087591.777777776,   -63944913.04444444,  127597579.55,
      -170137188.08333334,  150327467.03333333,  -84592161.5,
      27478884.766666666,   -3925554.966666667};
  auto v = detail::stehfest_weights(14);
  REQUIRE(v.size() == 15);
  for (int k = 1; k <= 14; ++k) {
    CHECK_THAT(v[size_t(k)] / expected[size_t(k - 1)], WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("tail_curve on the exponential matches e^{-x}") {
  auto curve = tail_curve(kExpLst, {0.5, 1.0, 2.0});
  REQUIRE(curve.p.size() == 3);
  CHECK_THAT(curve.p[0], WithinAbs(0.60653065971263342, 1e-7));
  CHECK_THAT(curve.p[1], WithinAbs(0.36787944117144233, 1e-7));
  CHECK_THAT(curve.p[2], WithinAbs(0.13533528323661270, 1e-7));
  CHECK(curve.method == "exact-inverted");
  CHECK(curve.warnings.empty());
}

TEST_CASE("inversion of 1/(1+sqrt(s)) cross-validates the Mittag-Leffler path") {
  // The tail of this law is E_{1/2}(-sqrt(x)); both code paths are
  // independent (contour inversion vs series/asymptotic evaluation).
  const TransformFn lst = [](C s) { return C(1.0, 0.0) / (C(1.0, 0.0) + std::sqrt(s)); };
  const std::vector<double> xs = {1.0, 10.0, 100.0};
  const std::vector<double> frozen = {0.427583576155807, 0.1705777183259727,
                                      0.05614099274382259};
  for (size_t i = 0; i < xs.size(); ++i) {
    double p = invert_tail(lst, xs[i]);
    CHECK_THAT(p, WithinAbs(frozen[i], 1e-6));
    CHECK_THAT(p, WithinAbs(mittag_leffler(0.5, -std::sqrt(xs[i])), 1e-6));
  }
}

TEST_CASE("Euler and Stehfest agree on analytic test transforms") {
  // Exp(1); Brownian Regime II downstream marginal (gamma = 2, sigma^2 = 2),
  // which simplifies to 1/sqrt(1+s); alpha = 3/2 limit 1/(1+sqrt(2s)).
  const TransformFn brn = [](C s) {
    return C(1.0, 0.0) / std::sqrt(C(1.0, 0.0) + s);
  };
  const TransformFn stable = [](C s) {
    return C(1.0, 0.0) / (C(1.0, 0.0) + std::sqrt(C(2.0, 0.0) * s));
  };
  for (double x : {0.5, 2.0, 10.0}) {
    CHECK_THAT(invert_tail(kExpLst, x) - invert_tail(kExpLst, x, stehfest_cfg()),
               WithinAbs(0.0, 1e-3));
    CHECK_THAT(invert_tail(brn, x) - invert_tail(brn, x, stehfest_cfg()),
               WithinAbs(0.0, 1e-3));
    CHECK_THAT(invert_tail(stable, x) - invert_tail(stable, x, stehfest_cfg()),
               WithinAbs(0.0, 1e-3));
  }
}

TEST_CASE("exact downstream tail for compound Poisson Exp jobs") {
  // loads (0.6, 0.8): frozen high-precision inversions pin the whole
  // transform + complex-psi + Euler chain; x = 5 sits near 0.163.
  TandemSystem sys(LevyModel::compound_poisson(1.0, JobLaw::exponential(1.0)),
                   TandemParams::from_loads(0.6, 0.8, 1.0));
  const TransformFn lst = [&](C s) { return lst_downstream(sys, s); };
  const std::vector<double> xs = {1.0, 2.0, 5.0, 10.0};
  const std::vector<double> frozen = {0.4995529414711584, 0.3631274032411569,
                                      0.1639304538674292, 0.05095063857265252};
  for (size_t i = 0; i < xs.size(); ++i) {
    CHECK_THAT(invert_tail(lst, xs[i]), WithinAbs(frozen[i], 1e-7));
  }
  CHECK_THAT(invert_tail(lst, 5.0), WithinAbs(0.163, 0.01));
  CHECK_THAT(invert_tail(lst, 5.0, stehfest_cfg()), WithinAbs(frozen[2], 1e-3));
}

TEST_CASE("exact downstream tail for compound Poisson Pareto jobs") {
  // loads (0.5, 0.95), nu = 1.5: exercises the complex incomplete-gamma
  // evaluation of the Pareto LST inside the Euler contour.
  TandemSystem sys(LevyModel::compound_poisson(1.0, JobLaw::pareto(1.5)),
                   TandemParams::from_loads(0.5, 0.95, 1.0));
  const TransformFn lst = [&](C s) { return lst_downstream(sys, s); };
  const double frozen = 0.4821370599;  // converged reference at x = 100
  CHECK_THAT(invert_tail(lst, 100.0), WithinAbs(frozen, 1e-5));
  CHECK_THAT(invert_tail(lst, 100.0, stehfest_cfg()), WithinAbs(frozen, 1e-3));
}

TEST_CASE("clamping is applied and flagged") {
  // Synthetic non-probability transforms force out-of-range raw values:
  // mass-2 exponential gives ccdf inverse 2 e^{-t} - 1 (negative for large t);
  // the mirrored one gives 2 - e^{-t} (> 1).
  const TransformFn low = [](C s) { return C(2.0, 0.0) / (C(1.0, 0.0) + s); };
  const TransformFn high = [](C s) { return C(-1.0, 0.0) / (C(1.0, 0.0) + s); };
  auto lo = invert_tail_checked(low, 2.0);
  CHECK(lo.clamped);
  CHECK(lo.value == 0.0);
  CHECK_THAT(lo.raw, WithinAbs(2.0 * std::exp(-2.0) - 1.0, 1e-7));
  auto hi = invert_tail_checked(high, 2.0);
  CHECK(hi.clamped);
  CHECK(hi.value == 1.0);
  CHECK_THAT(hi.raw, WithinAbs(2.0 - std::exp(-2.0), 1e-7));
  // In range: no clamp.
  CHECK_FALSE(invert_tail_checked(low, 0.1).clamped);
}

TEST_CASE("tail_curve warns about monotonicity violations") {
  // lst(s) = s/(1+s) makes (1-lst)/s the transform of 1 - e^{-t}, an
  // increasing "tail": every consecutive pair must be flagged.
  const TransformFn rising = [](C s) { return s / (C(1.0, 0.0) + s); };
  auto curve = tail_curve(rising, {0.5, 1.0, 2.0});
  CHECK(curve.warnings.size() == 2);
  CHECK_THAT(curve.p[0], WithinAbs(1.0 - std::exp(-0.5), 1e-7));
  CHECK_THAT(curve.p[2], WithinAbs(1.0 - std::exp(-2.0), 1e-7));
}

TEST_CASE("inversion parameter validation") {
  CHECK_THROWS_AS(invert_tail(kExpLst, 0.0), ParameterError);
  CHECK_THROWS_AS(invert_tail(kExpLst, -1.0), ParameterError);
  InversionConfig bad_acc;
  bad_acc.target_accuracy = 1e-12;
  CHECK_THROWS_AS(invert_tail(kExpLst, 1.0, bad_acc), ParameterError);
  InversionConfig odd;
  odd.method = InversionMethod::GaverStehfest;
  odd.stehfest_terms = 13;
  CHECK_THROWS_AS(invert_tail(kExpLst, 1.0, odd), ParameterError);
  InversionConfig too_many;
  too_many.method = InversionMethod::GaverStehfest;
  too_many.stehfest_terms = 20;
  CHECK_THROWS_AS(invert_tail(kExpLst, 1.0, too_many), ParameterError);
  CHECK_THROWS_AS(tail_curve(kExpLst, {1.0, 0.5}), ParameterError);
  CHECK_THROWS_AS(tail_curve(kExpLst, {}), ParameterError);
}

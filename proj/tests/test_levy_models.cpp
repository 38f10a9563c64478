#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "levytandem/levy_models.hpp"

using namespace levytandem;
using Catch::Approx;
using C = std::complex<double>;

namespace {

// Composite Simpson on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * ((i & 1) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Closed-form psi for compound Poisson Exp(mu) jobs served at rate r1
// (positive root of the quadratic r1 u^2 + (r1 mu - lambda - w) u - w mu = 0).
template <class T>
T psi_cp_exp_closed(double lam, double mu, double r1, T w) {
  T a = T(r1 * mu - lam) - w;
  return (-a + std::sqrt(a * a + T(4.0 * r1 * mu) * w)) / T(2.0 * r1);
}

const std::vector<double> kGrid = {1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0, 3.0, 10.0};

}  // namespace

TEST_CASE("laplace_exponent closed-form examples", "[models]") {
  auto bm = LevyModel::brownian(2.0, 1.0);
  REQUIRE(laplace_exponent(bm, 2.0, 1.0) == Approx(2.0).epsilon(1e-14));
  REQUIRE(laplace_exponent(bm, 2.0, 0.0) == 0.0);

  auto cp = LevyModel::compound_poisson(1.0, JobLaw::exponential(1.0));
  REQUIRE(laplace_exponent(cp, 2.0, 1.0) == Approx(1.5).epsilon(1e-14));
  REQUIRE(laplace_exponent(cp, 2.0, 0.0) == 0.0);
  // Cross-check the Exp job LST at s = 1 by quadrature.
  double b1 = simpson([](double x) { return std::exp(-x) * std::exp(-x); }, 0.0, 40.0, 4000);
  REQUIRE(cp.jobs.lst(1.0) == Approx(b1).epsilon(1e-9));

  auto st = LevyModel::alpha_stable(1.5, 1.0);
  REQUIRE(st.stable_scale() == Approx(std::numbers::sqrt2).epsilon(1e-14));
  REQUIRE(laplace_exponent(st, 2.0, 1.0) == Approx(1.0 + std::numbers::sqrt2).epsilon(1e-14));

  // phi'(0) = r1 - EJ1 for every model.
  for (const auto& m : {bm, cp, st}) {
    REQUIRE(laplace_exponent_prime(m, 2.0, 0.0) == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("alpha = 2 stable exponent reduces to Brownian sigma2 = 2", "[models]") {
  auto st2 = LevyModel::alpha_stable(2.0, 1.0);
  auto bm2 = LevyModel::brownian(2.0, 1.0);
  REQUIRE(st2.stable_scale() == Approx(1.0).epsilon(1e-15));
  for (double s : kGrid) {
    REQUIRE(laplace_exponent(st2, 2.0, s) ==
            Approx(laplace_exponent(bm2, 2.0, s)).margin(1e-12));
  }
  C z(0.7, 1.3);
  REQUIRE(std::abs(laplace_exponent(st2, 2.0, z) - laplace_exponent(bm2, 2.0, z)) < 1e-12);
}

TEST_CASE("psi_closed_brownian inverts phi", "[models]") {
  auto bm = LevyModel::brownian(2.0, 1.0);
  REQUIRE(psi_closed_brownian(bm, 2.0, C(2.0, 0.0)).real() == Approx(1.0).epsilon(1e-12));
  REQUIRE(std::abs(psi_closed_brownian(bm, 2.0, C(0.0, 0.0))) == 0.0);
  // Golden-ratio value: x + x^2 = 1 at x = (sqrt(5)-1)/2.
  REQUIRE(psi_closed_brownian(bm, 2.0, C(1.0, 0.0)).real() ==
          Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-13));
  // Bisection oracle at s = 0.5.
  double lo = 0.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (mid + mid * mid < 0.5 ? lo : hi) = mid;
  }
  REQUIRE(psi_closed_brownian(bm, 2.0, C(0.5, 0.0)).real() == Approx(lo).margin(1e-12));
  for (double s : kGrid) {
    C psi = psi_closed_brownian(bm, 2.0, C(s, 0.0));
    REQUIRE(std::abs(laplace_exponent(bm, 2.0, psi) - C(s, 0.0)) < 1e-12 * (1.0 + s));
  }
}

TEST_CASE("psi_numeric matches closed forms", "[models]") {
  auto bm = LevyModel::brownian(2.0, 1.0);
  for (double s : {0.1, 1.0, 10.0}) {
    REQUIRE(psi_numeric(bm, 2.0, s) ==
            Approx(psi_closed_brownian(bm, 2.0, C(s, 0.0)).real()).margin(1e-10));
  }
  REQUIRE(psi_numeric(bm, 2.0, 0.0) == 0.0);

  auto cp = LevyModel::compound_poisson(1.0, JobLaw::exponential(1.0));
  REQUIRE(psi_numeric(cp, 2.0, 1.5) == Approx(1.0).margin(1e-10));
  for (double w : kGrid) {
    REQUIRE(psi_numeric(cp, 2.0, w) ==
            Approx(psi_cp_exp_closed(1.0, 1.0, 2.0, w)).margin(1e-10));
  }
  // High-precision reference at w = 2.
  REQUIRE(psi_numeric(cp, 2.0, 2.0) == Approx(1.2807764064044151375).epsilon(1e-12));
}

TEST_CASE("psi_numeric complex continuation", "[models]") {
  auto cp = LevyModel::compound_poisson(1.0, JobLaw::exponential(1.0));
  for (C w : {C(1.0, 2.0), C(0.25, -3.0), C(0.05, 12.0)}) {
    C got = psi_numeric(cp, 2.0, w);
    C expect = psi_cp_exp_closed(1.0, 1.0, 2.0, w);
    CAPTURE(w.real(), w.imag());
    REQUIRE(std::abs(got - expect) < 1e-10);
    REQUIRE(std::abs(laplace_exponent(cp, 2.0, got) - w) < 1e-10);
  }
  auto bm = LevyModel::brownian(2.0, 1.0);
  for (C w : {C(0.5, 1.0), C(0.09, 5.0)}) {
    REQUIRE(std::abs(psi_numeric(bm, 2.0, w) - psi_closed_brownian(bm, 2.0, w)) < 1e-10);
  }
}

TEST_CASE("phi and psi are mutually inverse on the standard grid", "[models]") {
  std::vector<LevyModel> models = {
      LevyModel::brownian(2.0, 1.0),
      LevyModel::compound_poisson(1.0, JobLaw::exponential(1.0)),
      LevyModel::compound_poisson(1.0, JobLaw::pareto(1.5)),
      LevyModel::alpha_stable(1.5, 1.0),
      LevyModel::alpha_stable(2.0, 1.0),
  };
  for (const auto& m : models) {
    for (double s : kGrid) {
      double psi = psi_numeric(m, 2.0, s);
      REQUIRE(std::abs(laplace_exponent(m, 2.0, psi) - s) <= 1e-10 * (1.0 + s));
      double phi = laplace_exponent(m, 2.0, s);
      REQUIRE(std::abs(psi_numeric(m, 2.0, phi) - s) <= 1e-10 * (1.0 + s));
    }
  }
}

TEST_CASE("phi is convex on the real grid", "[models]") {
  std::vector<LevyModel> models = {
      LevyModel::brownian(2.0, 1.0),
      LevyModel::compound_poisson(1.0, JobLaw::exponential(1.0)),
      LevyModel::compound_poisson(1.0, JobLaw::pareto(1.5)),
      LevyModel::alpha_stable(1.5, 1.0),
  };
  for (const auto& m : models) {
    for (size_t i = 0; i + 2 < kGrid.size(); ++i) {
      double s0 = kGrid[i], s1 = kGrid[i + 1], s2 = kGrid[i + 2];
      double d1 = (laplace_exponent(m, 2.0, s1) - laplace_exponent(m, 2.0, s0)) / (s1 - s0);
      double d2 = (laplace_exponent(m, 2.0, s2) - laplace_exponent(m, 2.0, s1)) / (s2 - s1);
      REQUIRE((d2 - d1) / (s2 - s0) >= -1e-9);
    }
  }
}

TEST_CASE("busy period fixed point: M/M/1 closed form", "[models]") {
  auto cp = LevyModel::compound_poisson(1.0, JobLaw::exponential(1.0));
  REQUIRE(busy_period_lst(cp, 2.0, 0.0) == Approx(1.0).margin(1e-12));
  // pi(s) = ((3+s) - sqrt((3+s)^2 - 8)) / 2 for lambda = mu = 1, r1 = 2.
  struct Ref {
    double s, pi;
  };
  for (auto [s, pi] : {Ref{0.5, 0.71922359359558486254}, Ref{1.0, 0.5857864376269049512},
                       Ref{2.0, 0.43844718719116972509}, Ref{10.0, 0.1557112297752398099}}) {
    REQUIRE(busy_period_lst(cp, 2.0, s) == Approx(pi).margin(2e-13));
  }
  // pi'(0) = -E B / (r1 - lambda E B) = -1, by second-order one-sided
  // finite differences (the domain is s >= 0).
  double h = 1e-4;
  double dc = (busy_period_lst(cp, 2.0, 2.0 * h) - 4.0 * busy_period_lst(cp, 2.0, h) +
               3.0 * busy_period_lst(cp, 2.0, 0.0)) / (-2.0 * h);
  REQUIRE(dc == Approx(-1.0).margin(1e-6));
}

TEST_CASE("Takacs reconstruction of psi matches the root-finder", "[models]") {
  auto cp = LevyModel::compound_poisson(1.0, JobLaw::exponential(1.0));
  for (double s : {0.1, 1.0}) {
    REQUIRE(psi_via_busy_period(cp, 2.0, s) ==
            Approx(psi_numeric(cp, 2.0, s)).margin(1e-8));
  }
  REQUIRE(psi_via_busy_period(cp, 2.0, 0.5) ==
          Approx(0.39038820320220756873).margin(1e-12));
  for (double s : kGrid) {
    REQUIRE(psi_via_busy_period(cp, 2.0, s) ==
            Approx(psi_numeric(cp, 2.0, s)).margin(1e-8));
  }
  // Deterministic jobs exercise a different LST in the fixed point.
  auto cpd = LevyModel::compound_poisson(1.0, JobLaw::deterministic(1.0));
  for (double s : kGrid) {
    REQUIRE(psi_via_busy_period(cpd, 2.0, s) ==
            Approx(psi_numeric(cpd, 2.0, s)).margin(1e-8));
  }
}

TEST_CASE("Cardano psi for the alpha = 3/2 exponent", "[models]") {
  REQUIRE(std::abs(psi_cardano_three_halves(1.0, C(0.0, 0.0))) <= 1e-9);
  struct Ref {
    double s, psi;
  };
  // Reference values from 40-digit evaluation of the closed form, covering
  // both the complex-R region (s < 2 r^3 / 27) and the real-R region.
  for (auto [s, psi] : {Ref{0.001, 0.0009580622079777754}, Ref{0.01, 0.0088271426015011},
                        Ref{0.03, 0.02455756781880583}, Ref{0.1, 0.0724317796349015},
                        Ref{1.0, 0.5}, Ref{10.0, 2.92507969373911},
                        Ref{100.0, 15.30694538501192}}) {
    C got = psi_cardano_three_halves(1.0, C(s, 0.0));
    CAPTURE(s);
    REQUIRE(got.imag() == 0.0);
    REQUIRE(got.real() == Approx(psi).epsilon(1e-10));
  }
  // Root-finding oracle across the grid, for two drifts.
  auto stable = LevyModel::alpha_stable(1.5, 1.0);
  for (double r : {1.0, 2.0}) {
    for (double s : kGrid) {
      C got = psi_cardano_three_halves(r, C(s, 0.0));
      double expect = psi_numeric(stable, r + 1.0, s);
      REQUIRE(std::abs(got - C(expect, 0.0)) < 1e-9);
    }
  }
  REQUIRE(std::abs(psi_cardano_three_halves(2.0, C(0.25, 0.0)) -
                   C(psi_numeric(stable, 3.0, 0.25), 0.0)) < 1e-9);
}

TEST_CASE("Pareto job LST via incomplete gamma", "[models]") {
  auto jobs = JobLaw::pareto(1.5);
  REQUIRE(jobs.xm == Approx(1.0 / 3.0).epsilon(1e-15));
  REQUIRE(jobs.mean() == Approx(1.0).epsilon(1e-14));
  struct Ref {
    double s, b;
  };
  for (auto [s, b] : {Ref{1e-6, 0.999999000682051139}, Ref{0.01, 0.990665557308385548},
                      Ref{0.1, 0.919913096705600625}, Ref{1.0, 0.521429422230662496},
                      Ref{5.0, 0.0771098288087125751}, Ref{20.0, 2.13752923493076246e-4},
                      Ref{60.0, 1.38043240340475265e-10}}) {
    CAPTURE(s);
    REQUIRE(jobs.lst(s) == Approx(b).epsilon(1e-10));
  }
  REQUIRE(jobs.lst(0.0) == 1.0);
  // Derivative identity against central differences.
  for (double s : {0.05, 0.5, 2.0}) {
    double h = 1e-6 * std::max(1.0, s);
    double fd = (jobs.lst(s + h) - jobs.lst(s - h)) / (2.0 * h);
    REQUIRE(jobs.lst_prime(s) == Approx(fd).margin(1e-7));
  }
  REQUIRE(jobs.lst_prime(0.0) == Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("model_moments", "[models]") {
  auto cp = LevyModel::compound_poisson(1.0, JobLaw::exponential(1.0));
  auto mm = model_moments(cp);
  REQUIRE(mm.mean == Approx(1.0));
  REQUIRE(mm.variance_rate.has_value());
  REQUIRE(*mm.variance_rate == Approx(2.0).epsilon(1e-14));
  REQUIRE(mm.finite_third_moment);

  auto bm = model_moments(LevyModel::brownian(2.0, 1.0));
  REQUIRE(*bm.variance_rate == Approx(2.0));

  auto hp = model_moments(LevyModel::compound_poisson(1.0, JobLaw::pareto(1.5)));
  REQUIRE(hp.mean == Approx(1.0));
  REQUIRE_FALSE(hp.variance_rate.has_value());
  REQUIRE_FALSE(hp.finite_third_moment);

  REQUIRE(*model_moments(LevyModel::alpha_stable(2.0, 1.0)).variance_rate == Approx(2.0));
  REQUIRE_FALSE(model_moments(LevyModel::alpha_stable(1.5, 1.0)).variance_rate.has_value());
}

TEST_CASE("parameter validation", "[models]") {
  auto cp = LevyModel::compound_poisson(1.0, JobLaw::exponential(1.0));
  REQUIRE_THROWS_AS(laplace_exponent(cp, -2.0, 1.0), ParameterError);
  REQUIRE_THROWS_AS(LevyModel::alpha_stable(2.5, 1.0), ParameterError);
  REQUIRE_THROWS_AS(LevyModel::alpha_stable(1.0, 1.0), ParameterError);
  REQUIRE_THROWS_AS(LevyModel::brownian(-1.0, 1.0), ParameterError);
  REQUIRE_THROWS_AS(JobLaw::pareto(0.9), ParameterError);
  // Busy period requires rho1 < 1.
  REQUIRE_THROWS_AS(busy_period_lst(cp, 0.9, 1.0), ParameterError);
  // psi is undefined without positive drift.
  REQUIRE_THROWS_AS(psi_numeric(cp, 1.0, 1.0), ParameterError);

  REQUIRE_THROWS_AS(TandemParams::direct(1.25, 2.0, 1.0), ParameterError);
  REQUIRE_THROWS_AS(TandemParams::direct(2.0, 0.9, 1.0), ParameterError);
  REQUIRE_THROWS_AS(TandemParams::regime2(0.8, 0.1, 1.0), ParameterError);
}

TEST_CASE("tandem parametrizations and derived quantities", "[models]") {
  auto p = TandemParams::from_loads(0.5, 0.99, 1.0);
  REQUIRE(p.r1 == Approx(2.0).epsilon(1e-14));
  REQUIRE(p.r2 == Approx(1.0 / 0.99).epsilon(1e-14));
  REQUIRE(p.r == Approx(1.0).epsilon(1e-13));
  REQUIRE(p.eps == Approx(1.0 / 99.0).epsilon(1e-12));
  REQUIRE(p.gamma == Approx(99.0).epsilon(1e-11));
  REQUIRE(p.rho1 == Approx(0.5));
  REQUIRE(p.rho2 == Approx(0.99));

  auto q = TandemParams::regime2(2.0, 0.1, 1.0);
  REQUIRE(q.r1 == Approx(1.2).epsilon(1e-14));
  REQUIRE(q.r2 == Approx(1.1).epsilon(1e-14));
  REQUIRE(q.gamma == Approx(2.0).epsilon(1e-13));

  auto s = TandemParams::regime1(1.0, 0.01, 1.0);
  REQUIRE(s.r1 == Approx(2.0));
  REQUIRE(s.r2 == Approx(1.01));
}

#pragma once

// Monte Carlo estimation of the stationary tandem workloads (Q1, Q2):
//  - simulate_tandem_cp: exact event-driven paths for compound Poisson input;
//    time averages are computed in closed form on each linear segment of the
//    sample path, so the only error is statistical.
//  - simulate_tandem_diffusive: Lindley recursion on a time grid for Brownian
//    and spectrally-positive alpha-stable input. Brownian increments are
//    exact in law per step; the grid reflection itself carries a small
//    downward bias of order sqrt(step).
// Both use the decomposition Q2 = Qtot - Q1, where Qtot is the workload of a
// single queue at rate r2 fed by the same input path (validated against the
// total-workload transform identity in pk_transforms).
//
// Confidence intervals use batch means (default 30 batches, 95% t intervals):
// heavy-traffic autocorrelation is severe, and batching is the minimal honest
// CI method. Replications draw from counter-based RNG streams derived from
// the master seed with stride 2^33 counter values, so they can run
// concurrently without overlap; partial results merge in replication order,
// which keeps SimResult bit-for-bit deterministic for a given seed + config.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "levytandem/errors.hpp"
#include "levytandem/levy_models.hpp"

namespace levytandem {

// Observers for path-level inspection (tests, plotting). The CP simulator
// reports every linear piece (t0, duration, endpoint values); the diffusive
// simulator reports every grid point. Setting either forces serial
// replication execution.
using PieceObserver =
    std::function<void(double t0, double dur, double q1a, double q1b, double q2a, double q2b)>;
using GridObserver = std::function<void(double t, double q1, double q2)>;

struct SimConfig {
  std::uint64_t seed = 1;
  int replications = 4;
  std::uint64_t arrivals_per_replication = 0;  // compound Poisson mode
  double horizon = 0.0;                        // diffusive mode
  double step = 0.0;                           // diffusive mode
  double burn_in = 0.1;                        // fraction of each replication discarded
  std::vector<double> xs;                      // tail grid (strictly increasing, >= 0)
  int batches = 30;                            // total batch count target (>= 10)
  PieceObserver piece_observer;                // optional, CP only
  GridObserver grid_observer;                  // optional, diffusive only

  void validate() const {
    if (replications < 1) throw ParameterError("SimConfig: replications must be >= 1");
    if (!(burn_in >= 0.0) || burn_in >= 0.5) {
      throw ParameterError("SimConfig: burn_in must lie in [0, 0.5)");
    }
    if (batches < 10) {
      throw ParameterError("SimConfig: fewer than 10 batches gives no usable interval");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!(xs[i] >= 0.0) || !std::isfinite(xs[i])) {
        throw ParameterError("SimConfig: tail grid must be finite and >= 0");
      }
      if (i > 0 && !(xs[i] > xs[i - 1])) {
        throw ParameterError("SimConfig: tail grid must be strictly increasing");
      }
    }
  }
};

// Per-batch integrated path statistics (time-weighted raw moments).
struct BatchMoments {
  double w = 0.0;  // batch weight (elapsed time)
  double s1 = 0.0, s2 = 0.0;                  // integral of Q1, Q2
  double s11 = 0.0, s22 = 0.0, s12 = 0.0;     // integral of Q1^2, Q2^2, Q1*Q2
  double input = 0.0;                         // input volume during the batch
  std::vector<double> tail1, tail2;           // time with Q1 > x, Q2 > x per grid x
};

struct CorrelationEstimate {
  double cov = 0.0;
  double cov_hw = 0.0;
  double corr = 0.0;
  double corr_hw = 0.0;
  int batches = 0;
};

struct SimResult {
  std::vector<double> xs;
  std::vector<double> tail_q1, tail_q1_hw;
  std::vector<double> tail_q2, tail_q2_hw;
  double eq1 = 0.0, eq1_hw = 0.0;
  double eq2 = 0.0, eq2_hw = 0.0;
  double cov = 0.0, cov_hw = 0.0;
  double corr = 0.0, corr_hw = 0.0;
  double mean_input_rate = 0.0, input_rate_se = 0.0;
  double total_time = 0.0;  // post-burn-in time summed over replications
  int replications = 0;
  int batches = 0;
  std::uint64_t seed = 0;
  std::vector<BatchMoments> batch_moments;  // retained for estimate_correlation
};

namespace detail {

// splitmix64 with strided stream starts: stream i begins at counter offset
// i * 2^33, so streams stay disjoint for < 2^33 draws per replication.
class CounterRng {
 public:
  CounterRng(std::uint64_t master_seed, std::uint64_t stream)
      : state_(master_seed + stream * (kGolden << 33)) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += kGolden);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0, 1).
  double u01() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double exponential() { return -std::log(u01()); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double r = std::sqrt(2.0 * exponential());
    double t = 2.0 * std::numbers::pi * u01();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Standard spectrally-positive stable draw S_alpha(1, beta=1, 0) via the
  // Chambers-Mallows-Stuck / Weron formula; for alpha in (1, 2] it has mean 0
  // and log E exp(-s S) = s^alpha / cos(pi (alpha/2 - 1)). At alpha = 2 it
  // reduces to N(0, 2).
  double stable_standard(double alpha) {
    const double pi = std::numbers::pi;
    double v = pi * (u01() - 0.5);
    double w = exponential();
    double tb = std::tan(pi * alpha / 2.0);
    double b = std::atan(tb) / alpha;
    double s = std::pow(1.0 + tb * tb, 0.5 / alpha);
    double x = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
               std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
    return x;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline double draw_job(const JobLaw& jobs, CounterRng& rng) {
  switch (jobs.kind) {
    case JobKind::Exponential: return rng.exponential() / jobs.mu;
    case JobKind::Pareto: return jobs.xm * std::pow(rng.u01(), -1.0 / jobs.nu);
    case JobKind::Deterministic: return jobs.b;
  }
  throw ParameterError("draw_job: unknown job kind");
}

// Two-sided 97.5% Student-t quantile; normal beyond 30 degrees of freedom.
inline double t_975(int df) {
  static constexpr double table[30] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) return std::numeric_limits<double>::infinity();
  return df <= 30 ? table[df - 1] : 1.960;
}

// Time above level x for a linear segment running from a to b over duration d.
inline double time_above(double d, double a, double b, double x) {
  if (a == b) return a > x ? d : 0.0;
  double hi = std::max(a, b);
  double f = (hi - x) / std::abs(b - a);
  return d * std::clamp(f, 0.0, 1.0);
}

// Accumulate one linear piece: Q1 from a1 to b1, Q2 from a2 to b2 over d.
inline void accumulate_piece(BatchMoments& m, const std::vector<double>& xs, double d,
                             double a1, double b1, double a2, double b2) {
  if (!(d > 0.0)) return;
  m.w += d;
  m.s1 += d * (a1 + b1) / 2.0;
  m.s2 += d * (a2 + b2) / 2.0;
  m.s11 += d * (a1 * a1 + a1 * b1 + b1 * b1) / 3.0;
  m.s22 += d * (a2 * a2 + a2 * b2 + b2 * b2) / 3.0;
  m.s12 += d * (2.0 * a1 * a2 + 2.0 * b1 * b2 + a1 * b2 + a2 * b1) / 6.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    m.tail1[i] += time_above(d, a1, b1, xs[i]);
    m.tail2[i] += time_above(d, a2, b2, xs[i]);
  }
}

// Accumulate one grid sample with weight d (rectangle rule).
inline void accumulate_point(BatchMoments& m, const std::vector<double>& xs, double d,
                             double q1, double q2) {
  m.w += d;
  m.s1 += d * q1;
  m.s2 += d * q2;
  m.s11 += d * q1 * q1;
  m.s22 += d * q2 * q2;
  m.s12 += d * q1 * q2;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (q1 > xs[i]) m.tail1[i] += d;
    if (q2 > xs[i]) m.tail2[i] += d;
  }
}

inline double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return std::numeric_limits<double>::infinity();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / double(v.size() - 1));
}

// Worker-pool size: min(replications, LEVYTANDEM_THREADS if set, hardware).
inline int worker_count(int replications) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("LEVYTANDEM_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = static_cast<unsigned>(cap);
  }
  return std::max(1, std::min<int>(replications, int(hw)));
}

// Run fn(rep) for rep in [0, replications); results land in caller-owned
// slots indexed by rep, so the merge order never depends on scheduling.
// Worker exceptions are captured and rethrown after the pool joins.
template <class Fn>
void run_replications(int replications, int workers, Fn&& fn) {
  if (workers <= 1) {
    for (int rep = 0; rep < replications; ++rep) fn(rep);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int rep = next.fetch_add(1); rep < replications; rep = next.fetch_add(1)) fn(rep);
      } catch (...) {
        errors[std::size_t(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline void require_model_matches_params(const LevyModel& model, const TandemParams& params) {
  if (std::abs((params.r1 - params.r) - model.mean_input) > 1e-12 * (1.0 + std::abs(params.r1))) {
    throw ParameterError(
        "simulate: TandemParams were derived with a different mean input rate than the model");
  }
}

}  // namespace detail

// Batch-means covariance/correlation of paired stationary batch moments.
// Point estimates use the pooled (weight-averaged) moments; half-widths come
// from the spread of per-batch statistics (95% t interval). Fewer than 10
// batches is a config error.
inline CorrelationEstimate estimate_correlation(const std::vector<BatchMoments>& batches) {
  if (batches.size() < 10) {
    throw ParameterError("estimate_correlation: fewer than 10 batches");
  }
  double W = 0.0, S1 = 0.0, S2 = 0.0, S11 = 0.0, S22 = 0.0, S12 = 0.0;
  for (const auto& b : batches) {
    if (!(b.w > 0.0)) throw ParameterError("estimate_correlation: empty batch");
    W += b.w;
    S1 += b.s1;
    S2 += b.s2;
    S11 += b.s11;
    S22 += b.s22;
    S12 += b.s12;
  }
  const double mu1 = S1 / W, mu2 = S2 / W;
  const double var1 = S11 / W - mu1 * mu1;
  const double var2 = S22 / W - mu2 * mu2;
  CorrelationEstimate out;
  out.batches = int(batches.size());
  out.cov = S12 / W - mu1 * mu2;

  std::vector<double> covs, corrs;
  covs.reserve(batches.size());
  for (const auto& b : batches) {
    double m1 = b.s1 / b.w, m2 = b.s2 / b.w;
    double c = b.s12 / b.w - m1 * m2;
    covs.push_back(c);
    double v1 = b.s11 / b.w - m1 * m1;
    double v2 = b.s22 / b.w - m2 * m2;
    if (v1 > 0.0 && v2 > 0.0) corrs.push_back(c / std::sqrt(v1 * v2));
  }
  int n = int(batches.size());
  out.cov_hw = detail::t_975(n - 1) * detail::sample_sd(covs) / std::sqrt(double(n));

  if (var1 > 0.0 && var2 > 0.0) {
    out.corr = std::clamp(out.cov / std::sqrt(var1 * var2), -1.0, 1.0);
    int nr = int(corrs.size());
    out.corr_hw = nr >= 2 ? detail::t_975(nr - 1) * detail::sample_sd(corrs) / std::sqrt(double(nr))
                          : std::numeric_limits<double>::infinity();
  } else {
    // Degenerate (constant) component: no correlation information.
    out.corr = 0.0;
    out.corr_hw = std::numeric_limits<double>::infinity();
  }
  return out;
}

// Convenience overload for paired equally-spaced samples: sections the pair
// sequence into n_batches contiguous batches and applies the batch-means
// estimator above.
inline CorrelationEstimate estimate_correlation(const std::vector<double>& q1,
                                                const std::vector<double>& q2,
                                                int n_batches = 30) {
  if (q1.size() != q2.size()) {
    throw ParameterError("estimate_correlation: paired samples must have equal length");
  }
  if (n_batches < 10) throw ParameterError("estimate_correlation: fewer than 10 batches");
  const std::size_t n = q1.size();
  if (n < std::size_t(2 * n_batches)) {
    throw ParameterError("estimate_correlation: need at least two samples per batch");
  }
  std::vector<BatchMoments> batches(static_cast<std::size_t>(n_batches));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = std::min(std::size_t(n_batches) - 1, i * std::size_t(n_batches) / n);
    detail::accumulate_point(batches[k], {}, 1.0, q1[i], q2[i]);
  }
  return estimate_correlation(batches);
}

inline CorrelationEstimate estimate_correlation(const SimResult& res) {
  return estimate_correlation(res.batch_moments);
}

namespace detail {

inline SimResult finalize(std::vector<BatchMoments> batches, const SimConfig& cfg) {
  SimResult res;
  res.xs = cfg.xs;
  res.replications = cfg.replications;
  res.batches = int(batches.size());
  res.seed = cfg.seed;

  const int n = int(batches.size());
  const double tq = t_975(n - 1);
  double W = 0.0;
  for (const auto& b : batches) W += b.w;
  res.total_time = W;

  auto batch_ci = [&](auto&& total, auto&& per_batch, double& est, double& hw) {
    est = total / W;
    std::vector<double> vals;
    vals.reserve(batches.size());
    for (const auto& b : batches) vals.push_back(per_batch(b));
    hw = tq * sample_sd(vals) / std::sqrt(double(n));
  };

  const std::size_t nx = cfg.xs.size();
  res.tail_q1.resize(nx);
  res.tail_q1_hw.resize(nx);
  res.tail_q2.resize(nx);
  res.tail_q2_hw.resize(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    double tot1 = 0.0, tot2 = 0.0;
    for (const auto& b : batches) {
      tot1 += b.tail1[i];
      tot2 += b.tail2[i];
    }
    batch_ci(tot1, [&](const BatchMoments& b) { return b.tail1[i] / b.w; }, res.tail_q1[i],
             res.tail_q1_hw[i]);
    batch_ci(tot2, [&](const BatchMoments& b) { return b.tail2[i] / b.w; }, res.tail_q2[i],
             res.tail_q2_hw[i]);
  }

  double S1 = 0.0, S2 = 0.0, SIn = 0.0;
  for (const auto& b : batches) {
    S1 += b.s1;
    S2 += b.s2;
    SIn += b.input;
  }
  batch_ci(S1, [](const BatchMoments& b) { return b.s1 / b.w; }, res.eq1, res.eq1_hw);
  batch_ci(S2, [](const BatchMoments& b) { return b.s2 / b.w; }, res.eq2, res.eq2_hw);

  res.mean_input_rate = SIn / W;
  std::vector<double> rates;
  rates.reserve(batches.size());
  for (const auto& b : batches) rates.push_back(b.input / b.w);
  res.input_rate_se = sample_sd(rates) / std::sqrt(double(n));

  CorrelationEstimate ce = estimate_correlation(batches);
  res.cov = ce.cov;
  res.cov_hw = ce.cov_hw;
  res.corr = ce.corr;
  res.corr_hw = ce.corr_hw;
  res.batch_moments = std::move(batches);
  return res;
}

}  // namespace detail

// Exact event-driven simulation for compound Poisson input (exponential or
// Pareto jobs). Between arrivals both V1 (rate r1) and Vtot (rate r2) drain
// linearly, so Q2 = Vtot - V1 is piecewise linear with at most three pieces
// per inter-arrival gap; every time average is computed in closed form on
// those pieces. Burn-in and batch boundaries are placed at arrival epochs.
inline SimResult simulate_tandem_cp(const LevyModel& model, const TandemParams& params,
                                    const SimConfig& cfg) {
  cfg.validate();
  if (model.kind != ModelKind::CompoundPoisson) {
    throw ParameterError("simulate_tandem_cp: model must be compound Poisson");
  }
  if (model.jobs.kind == JobKind::Deterministic) {
    throw ParameterError("simulate_tandem_cp: supported job laws are exponential and Pareto");
  }
  detail::require_model_matches_params(model, params);
  const std::uint64_t N = cfg.arrivals_per_replication;
  if (N == 0) {
    throw ParameterError("simulate_tandem_cp: arrivals_per_replication must be set");
  }
  const int reps = cfg.replications;
  const int b_per_rep = (cfg.batches + reps - 1) / reps;
  const std::uint64_t K = std::uint64_t(cfg.burn_in * double(N));  // warm-up arrivals
  if (N < K + 2 || N - K - 1 < std::uint64_t(b_per_rep)) {
    throw ParameterError("simulate_tandem_cp: horizon too short for burn-in and batching");
  }
  const std::uint64_t M = N - 1 - K;  // measured inter-arrival gaps per replication

  const double r1 = params.r1, r2 = params.r2, lambda = model.lambda;
  std::vector<std::vector<BatchMoments>> per_rep(static_cast<std::size_t>(reps));

  auto run_one = [&](int rep) {
    detail::CounterRng rng(cfg.seed, std::uint64_t(rep));
    auto& acc = per_rep[std::size_t(rep)];
    acc.assign(std::size_t(b_per_rep), BatchMoments{});
    for (auto& b : acc) {
      b.tail1.assign(cfg.xs.size(), 0.0);
      b.tail2.assign(cfg.xs.size(), 0.0);
    }
    double v1 = 0.0, vt = 0.0, t = 0.0;
    for (std::uint64_t i = 0; i < N; ++i) {
      const double gap = rng.exponential() / lambda;
      const bool measured = i > K;
      BatchMoments* m = nullptr;
      if (measured) m = &acc[std::size_t((i - K - 1) * std::uint64_t(b_per_rep) / M)];

      // Piece A: both queues drain, Q2 rises at r1 - r2.
      const double t1 = v1 / r1;  // upstream empties first (v1 <= vt, r1 > r2)
      const double tt = vt / r2;
      const double dA = std::min(t1, gap);
      if (dA > 0.0) {
        double nb1 = v1 - r1 * dA;
        double q2a = vt - v1;
        double q2b = (vt - r2 * dA) - nb1;
        if (m) detail::accumulate_piece(*m, cfg.xs, dA, v1, nb1, std::max(q2a, 0.0), std::max(q2b, 0.0));
        if (cfg.piece_observer) cfg.piece_observer(t, dA, v1, nb1, std::max(q2a, 0.0), std::max(q2b, 0.0));
      }
      // Piece B: upstream empty, Qtot (= Q2) drains at r2.
      const double dB = std::min(tt, gap) - dA;
      if (dB > 0.0) {
        double q2a = vt - r2 * dA;
        double q2b = vt - r2 * (dA + dB);
        if (m) detail::accumulate_piece(*m, cfg.xs, dB, 0.0, 0.0, std::max(q2a, 0.0), std::max(q2b, 0.0));
        if (cfg.piece_observer) cfg.piece_observer(t + dA, dB, 0.0, 0.0, std::max(q2a, 0.0), std::max(q2b, 0.0));
      }
      // Piece C: system empty.
      const double dC = gap - std::max(dA, std::min(tt, gap));
      if (dC > 0.0) {
        if (m) detail::accumulate_piece(*m, cfg.xs, dC, 0.0, 0.0, 0.0, 0.0);
        if (cfg.piece_observer) cfg.piece_observer(t + gap - dC, dC, 0.0, 0.0, 0.0, 0.0);
      }

      v1 = std::max(v1 - r1 * gap, 0.0);
      vt = std::max(vt - r2 * gap, 0.0);
      t += gap;
      const double job = detail::draw_job(model.jobs, rng);
      if (!std::isfinite(job) || job < 0.0) {
        throw NumericError("simulate_tandem_cp: non-finite job draw");
      }
      if (m) m->input += job;
      v1 += job;
      vt += job;
      if (vt < v1) vt = v1;  // guard against rounding drift; exactly equal in theory
    }
  };

  const int workers = cfg.piece_observer ? 1 : detail::worker_count(reps);
  detail::run_replications(reps, workers, run_one);

  std::vector<BatchMoments> merged;
  merged.reserve(std::size_t(reps) * std::size_t(b_per_rep));
  for (auto& r : per_rep) {
    for (auto& b : r) merged.push_back(std::move(b));
  }
  return detail::finalize(std::move(merged), cfg);
}

// Default diffusive grid step: per-step drift well below per-step noise.
inline double default_step(double eps) { return std::min(0.01, 0.01 / eps); }

// Grid-discretized simulation for Brownian or spectrally-positive
// alpha-stable input via the Lindley recursion applied on the same input
// path to both rates: Q1(n+1) = max(Q1(n) + Jinc - r1*step, 0),
// Qtot(n+1) = max(Qtot(n) + Jinc - r2*step, 0), Q2 = Qtot - Q1 >= 0.
inline SimResult simulate_tandem_diffusive(const LevyModel& model, const TandemParams& params,
                                           const SimConfig& cfg) {
  cfg.validate();
  if (model.kind == ModelKind::CompoundPoisson) {
    throw ParameterError(
        "simulate_tandem_diffusive: use simulate_tandem_cp for compound Poisson input");
  }
  detail::require_model_matches_params(model, params);
  if (!(cfg.horizon > 0.0)) {
    throw ParameterError("simulate_tandem_diffusive: horizon must be > 0");
  }
  if (!(cfg.step > 0.0) || cfg.step > cfg.horizon) {
    throw ParameterError("simulate_tandem_diffusive: step must lie in (0, horizon]");
  }
  if (cfg.step * params.eps > 0.1) {
    throw ParameterError("simulate_tandem_diffusive: step too coarse relative to 1/eps");
  }
  const std::uint64_t n_steps = std::uint64_t(std::llround(cfg.horizon / cfg.step));
  const int reps = cfg.replications;
  const int b_per_rep = (cfg.batches + reps - 1) / reps;
  const std::uint64_t K = std::uint64_t(cfg.burn_in * double(n_steps));
  if (n_steps < K + 2 || n_steps - K < std::uint64_t(b_per_rep)) {
    throw ParameterError("simulate_tandem_diffusive: horizon too short for burn-in and batching");
  }
  const std::uint64_t M = n_steps - K;  // measured grid points per replication

  const double delta = cfg.step;
  const double drift = model.mean_input * delta;
  const bool brownian = model.kind == ModelKind::Brownian;
  const double noise_scale =
      brownian ? std::sqrt(model.sigma2 * delta) : std::pow(delta, 1.0 / model.alpha);
  const double d1 = params.r1 * delta, d2 = params.r2 * delta;
  std::vector<std::vector<BatchMoments>> per_rep(static_cast<std::size_t>(reps));

  auto run_one = [&](int rep) {
    detail::CounterRng rng(cfg.seed, std::uint64_t(rep));
    auto& acc = per_rep[std::size_t(rep)];
    acc.assign(std::size_t(b_per_rep), BatchMoments{});
    for (auto& b : acc) {
      b.tail1.assign(cfg.xs.size(), 0.0);
      b.tail2.assign(cfg.xs.size(), 0.0);
    }
    double q1 = 0.0, qt = 0.0;
    for (std::uint64_t j = 0; j < n_steps; ++j) {
      const double noise = brownian ? rng.normal() : rng.stable_standard(model.alpha);
      const double jinc = drift + noise_scale * noise;
      if (!std::isfinite(jinc)) {
        throw NumericError("simulate_tandem_diffusive: non-finite increment draw");
      }
      q1 = std::max(q1 + jinc - d1, 0.0);
      qt = std::max(qt + jinc - d2, 0.0);
      if (qt < q1) qt = q1;  // guard against rounding drift
      const double q2 = qt - q1;
      if (j >= K) {
        BatchMoments& m = acc[std::size_t((j - K) * std::uint64_t(b_per_rep) / M)];
        detail::accumulate_point(m, cfg.xs, delta, q1, q2);
        m.input += jinc;
      }
      if (cfg.grid_observer) cfg.grid_observer(double(j + 1) * delta, q1, q2);
    }
  };

  const int workers = cfg.grid_observer ? 1 : detail::worker_count(reps);
  detail::run_replications(reps, workers, run_one);

  std::vector<BatchMoments> merged;
  merged.reserve(std::size_t(reps) * std::size_t(b_per_rep));
  for (auto& r : per_rep) {
    for (auto& b : r) merged.push_back(std::move(b));
  }
  return detail::finalize(std::move(merged), cfg);
}

}  // namespace levytandem

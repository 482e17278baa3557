#include "oujump/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "oujump/errors.hpp"
#include "oujump/ruin.hpp"

namespace oujump {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Strictly inside (0,1); avoids log(0) and keeps draws stdlib-independent.
double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double exponential(Rng& rng, double rate) {
  return -std::log(uniform01(rng)) / rate;
}

/// Magnitude draw for one side of the jump law: weights w (summing to 1),
/// rates. Composition when all weights are positive; otherwise bisection on
/// F(t) = sum w_k (1 - exp(-rate_k t)).
double sample_magnitude(const std::vector<double>& w,
                        const std::vector<double>& rates, Rng& rng) {
  const bool convex = std::all_of(w.begin(), w.end(),
                                  [](double v) { return v > 0.0; });
  if (convex) {
    const double u = uniform01(rng);
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      cum += w[k];
      if (u < cum) return exponential(rng, rates[k]);
    }
    return exponential(rng, rates.back());
  }
  const double v = uniform01(rng);
  auto cdf = [&](double t) {
    double f = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      f += w[k] * (1.0 - std::exp(-rates[k] * t));
    }
    return f;
  };
  double hi = 1.0 / *std::min_element(rates.begin(), rates.end());
  for (int grow = 0; grow < 200 && cdf(hi) < v; ++grow) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < v ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double effective_barrier(const OUModel& model, double x,
                         const PathConfig& config) {
  if (model.kappa <= 0.0) return std::numeric_limits<double>::infinity();
  if (config.upper_barrier != 0.0) {
    if (!(config.upper_barrier > std::max(x, 0.0))) {
      throw Error(ErrorKind::BadConfig,
                  "upper barrier must exceed max(start point, 0)");
    }
    return config.upper_barrier;
  }
  const double rate = model.r() >= 1 ? model.mu(1) : 1.0;
  return x + 30.0 / rate;
}

void require_path_setup(double x, double level, const PathConfig& config) {
  if (!(x > level)) {
    throw Error(ErrorKind::BadScenario,
                "start point must lie strictly above the level");
  }
  if (!(config.horizon > 0.0)) {
    throw Error(ErrorKind::BadConfig, "horizon must be positive");
  }
  if (config.n_paths < 1) {
    throw Error(ErrorKind::BadConfig, "need at least one path");
  }
}

/// Fixed-order tallies; exact integer counts plus the Laplace accumulators.
struct Tally {
  std::int64_t jump = 0;
  std::int64_t cont = 0;
  std::int64_t surv = 0;
  double sum_w = 0.0;   // e^{-zeta Z} over jump crossings
  double sum_w2 = 0.0;  // squares, for the sample variance
};

/// Runs all paths with per-path substreams and a scheduling-independent
/// chunked reduction: chunk boundaries depend only on n_paths, each chunk
/// is accumulated in path order, and chunks are combined in index order.
Tally run_paths(const OUModel& model, double x, double level, double zeta,
                const PathConfig& config) {
  const std::int64_t n = config.n_paths;
  const std::int64_t chunk = 8192;
  const std::int64_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<Tally> parts(static_cast<std::size_t>(n_chunks));

  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks) break;
      Tally t;
      const std::int64_t lo = c * chunk;
      const std::int64_t hi = std::min(n, lo + chunk);
      for (std::int64_t i = lo; i < hi; ++i) {
        Rng rng = path_rng(config.seed, static_cast<std::uint64_t>(i));
        const FirstPassageResult r =
            simulate_first_passage(model, x, level, config, rng);
        switch (r.outcome) {
          case Outcome::JumpCross: {
            ++t.jump;
            const double w = std::exp(-zeta * r.undershoot);
            t.sum_w += w;
            t.sum_w2 += w * w;
            break;
          }
          case Outcome::ContinuousCross:
            ++t.cont;
            break;
          case Outcome::Survived:
            ++t.surv;
            break;
        }
      }
      parts[static_cast<std::size_t>(c)] = t;
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads = static_cast<unsigned>(
      std::min<std::int64_t>(n_chunks, static_cast<std::int64_t>(hw)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  Tally total;
  for (const Tally& t : parts) {
    total.jump += t.jump;
    total.cont += t.cont;
    total.surv += t.surv;
    total.sum_w += t.sum_w;
    total.sum_w2 += t.sum_w2;
  }
  return total;
}

/// Survivor-bias bound: every survivor could still cross, with probability
/// at most the analytic tail value at the barrier (outward drift) or
/// exactly 1 (inward drift, recurrent).
double survivor_bias(const OUModel& model, double level, double barrier,
                     std::int64_t surv, std::int64_t n, std::string& note) {
  if (surv == 0) {
    note = "no survivors declared";
    return 0.0;
  }
  const double frac = static_cast<double>(surv) / static_cast<double>(n);
  if (model.kappa < 0.0) {
    note = "survivors (recurrent case) bound the bias by their fraction";
    return frac;
  }
  double tail = 1.0;
  try {
    const AsymptoticResult k = asymptotic_K(model, level);
    tail = std::min(1.0, std::abs(k.constant.real()) * k.normalizer(barrier));
    note = "survivor fraction scaled by the analytic tail value at the "
           "barrier";
  } catch (const Error&) {
    note = "survivor fraction (no analytic tail value available)";
  }
  return frac * tail;
}

}  // namespace

Rng path_rng(std::uint64_t seed, std::uint64_t path_index) {
  std::uint64_t state = seed + 0x9e3779b97f4a7c15ULL * (path_index + 1);
  const std::uint64_t a = splitmix64(state);
  return Rng(a);
}

double sample_jump(const OUModel& model, Rng& rng) {
  const double u = uniform01(rng);
  if (u < model.jumps.p) {
    return -sample_magnitude(model.jumps.alphas, model.jumps.mus, rng);
  }
  return sample_magnitude(model.jumps.betas, model.jumps.nus, rng);
}

FirstPassageResult simulate_first_passage(const OUModel& model, double x,
                                          double level,
                                          const PathConfig& config, Rng& rng) {
  if (!(x > level)) {
    throw Error(ErrorKind::BadScenario,
                "start point must lie strictly above the level");
  }
  const double barrier = effective_barrier(model, x, config);
  double t = 0.0;
  double X = x;
  while (true) {
    const double wait = exponential(rng, model.lambda);
    if (X != 0.0) {
      const double ratio = level / X;
      const bool reachable = model.kappa < 0.0
                                 ? (ratio > 0.0 && ratio < 1.0)
                                 : (ratio > 1.0);
      if (reachable) {
        const double t_star = std::log(ratio) / model.kappa;
        if (t_star <= wait) {
          if (t + t_star >= config.horizon) {
            return {Outcome::Survived, config.horizon, 0.0};
          }
          return {Outcome::ContinuousCross, t + t_star, 0.0};
        }
      }
    }
    t += wait;
    if (t >= config.horizon) return {Outcome::Survived, t, 0.0};
    X = X * std::exp(model.kappa * wait) + sample_jump(model, rng);
    if (X <= level) return {Outcome::JumpCross, t, level - X};
    if (model.kappa > 0.0 && X >= barrier) return {Outcome::Survived, t, 0.0};
  }
}

Estimate estimate_ruin(const OUModel& model, double x, double level,
                       const PathConfig& config) {
  require_path_setup(x, level, config);
  const double barrier = effective_barrier(model, x, config);
  const Tally t = run_paths(model, x, level, 0.0, config);
  const double n = static_cast<double>(config.n_paths);
  Estimate e;
  e.n = config.n_paths;
  e.mean = static_cast<double>(t.jump + t.cont) / n;
  e.std_err = std::sqrt(std::max(0.0, e.mean * (1.0 - e.mean)) / n);
  e.bias_bound =
      survivor_bias(model, level, barrier, t.surv, config.n_paths,
                    e.truncation_note);
  return e;
}

LaplaceSplit estimate_laplace(const OUModel& model, double x, double level,
                              double zeta, const PathConfig& config) {
  require_path_setup(x, level, config);
  if (zeta < 0.0) {
    throw Error(ErrorKind::BadConfig, "transform argument must be >= 0");
  }
  const double barrier = effective_barrier(model, x, config);
  const Tally t = run_paths(model, x, level, zeta, config);
  const double n = static_cast<double>(config.n_paths);

  LaplaceSplit out;
  out.jump.n = config.n_paths;
  out.jump.mean = t.sum_w / n;
  if (config.n_paths > 1) {
    const double var =
        std::max(0.0, (t.sum_w2 - t.sum_w * t.sum_w / n) / (n - 1.0));
    out.jump.std_err = std::sqrt(var / n);
  }
  out.jump.bias_bound = survivor_bias(model, level, barrier, t.surv,
                                      config.n_paths,
                                      out.jump.truncation_note);

  out.cont.n = config.n_paths;
  out.cont.mean = static_cast<double>(t.cont) / n;
  out.cont.std_err =
      std::sqrt(std::max(0.0, out.cont.mean * (1.0 - out.cont.mean)) / n);
  out.cont.bias_bound = out.jump.bias_bound;
  out.cont.truncation_note = out.jump.truncation_note;
  return out;
}

}  // namespace oujump

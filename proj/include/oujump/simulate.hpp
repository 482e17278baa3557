#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "oujump/model.hpp"

namespace oujump {

/// Monte Carlo run settings.  upper_barrier = 0 asks for the default
/// barrier x + 30/mu_1 (outward drift only); horizon caps simulated time
/// per path.
struct PathConfig {
  double horizon = 1e5;
  double upper_barrier = 0.0;
  std::uint64_t seed = 1;
  std::int64_t n_paths = 100000;
};

enum class Outcome { JumpCross, ContinuousCross, Survived };

/// One exact path: how the level was first crossed, when, and by how much
/// the jump overshot it (undershoot Z = level - X_tau, zero exactly for a
/// continuous crossing).
struct FirstPassageResult {
  Outcome outcome = Outcome::Survived;
  double tau = 0.0;
  double undershoot = 0.0;
};

/// Sample statistic with its Monte Carlo error and the bound on the bias
/// introduced by declaring long-lived paths survived.
struct Estimate {
  double mean = 0.0;
  double std_err = 0.0;  ///< sample sd / sqrt(n)  ("stderr" is a C macro)
  std::int64_t n = 0;
  double bias_bound = 0.0;
  std::string truncation_note;
};

/// Jump-crossing Laplace functional and continuous-crossing fraction.
struct LaplaceSplit {
  Estimate jump;  ///< mean of e^{-zeta Z} 1{jump crossing}
  Estimate cont;  ///< fraction of continuous crossings
};

using Rng = std::mt19937_64;

/// Independent substream for one path index under a base seed; identical
/// regardless of thread count or scheduling.
Rng path_rng(std::uint64_t seed, std::uint64_t path_index);

/// One jump: sign by (p, q), magnitude by mixture composition when every
/// same-side coefficient is positive, else by bisection inversion of the
/// one-sided distribution function (fixed 60 iterations, ~1e-12 accuracy
/// in probability).
double sample_jump(const OUModel& model, Rng& rng);

/// Exact simulation: exponential waiting times, deterministic flow between
/// jumps with an analytic continuous-crossing check inside each waiting
/// interval, jump crossings tested after each jump.  Paths are declared
/// Survived past the time horizon, or past the upper barrier when the
/// drift points outward.
FirstPassageResult simulate_first_passage(const OUModel& model, double x,
                                          double level,
                                          const PathConfig& config, Rng& rng);

/// Crossing fraction with binomial standard error.  For outward drift the
/// attached bias bound scales the survivor fraction by the analytic tail
/// estimate at the barrier when one is available.
Estimate estimate_ruin(const OUModel& model, double x, double level,
                       const PathConfig& config);

/// Mean of e^{-zeta Z} over jump crossings and the continuous-crossing
/// fraction, with standard errors and survivor bias bounds.
LaplaceSplit estimate_laplace(const OUModel& model, double x, double level,
                              double zeta, const PathConfig& config);

}  // namespace oujump

#pragma once

#include <vector>

#include "oujump/errors.hpp"

namespace oujump {

/// Two-sided jump law for the driving compound Poisson process.
///
/// A jump is negative with probability p and positive with probability
/// q = 1 - p.  Conditional on the sign, the magnitude follows a mixed
/// exponential law:
///
///   downward density  g_-(u) = sum_k alpha_k * mu_k * exp(mu_k * u),  u < 0
///   upward density    g_+(u) = sum_d beta_d * nu_d * exp(-nu_d * u),  u > 0
///
/// with 0 < mu_1 < ... < mu_r, 0 < nu_1 < ... < nu_s, sum alpha_k = 1,
/// sum beta_d = 1, alpha_1 > 0, beta_1 > 0.  Coefficients other than the
/// first may be negative as long as the densities stay nonnegative
/// (non-convex mixtures).
struct JumpMixture {
  double p = 1.0;              ///< probability of a downward jump
  std::vector<double> alphas;  ///< downward mixture coefficients
  std::vector<double> mus;     ///< downward rates, strictly increasing
  std::vector<double> betas;   ///< upward mixture coefficients (empty iff p=1)
  std::vector<double> nus;     ///< upward rates, strictly increasing

  double q() const { return 1.0 - p; }
  int r() const { return static_cast<int>(mus.size()); }
  int s() const { return static_cast<int>(nus.size()); }
};

/// State process: dX_t = kappa * X_t dt + dU_t with U compound Poisson of
/// intensity lambda and jump law `jumps`.  Between jumps the state follows
/// the deterministic flow X(t) = X(s) * exp(kappa * (t - s)).
struct OUModel {
  double kappa = 1.0;   ///< linear drift coefficient (nonzero)
  double lambda = 1.0;  ///< jump intensity (positive)
  JumpMixture jumps;

  int r() const { return jumps.r(); }
  int s() const { return jumps.s(); }
  /// Downward rate mu_k, 1-based as in the classical mixture indexing.
  double mu(int k) const { return jumps.mus.at(static_cast<size_t>(k - 1)); }
  /// Upward rate nu_d, 1-based.
  double nu(int d) const { return jumps.nus.at(static_cast<size_t>(d - 1)); }
  double alpha(int k) const { return jumps.alphas.at(static_cast<size_t>(k - 1)); }
  double beta(int d) const { return jumps.betas.at(static_cast<size_t>(d - 1)); }
};

enum class PointKind { Zero, Singularity };

/// Classification of one real branch point of the integral kernel.
/// The kernel behaves like (z - location)^exponent near the point; a
/// positive exponent makes it a Zero, a negative one a Singularity.
struct PointClass {
  double location = 0.0;
  double exponent = 0.0;
  PointKind kind = PointKind::Singularity;
};

/// Sign pattern of a first-passage query.  When level and drift share the
/// same sign, the deterministic flow moves away from the level, so the
/// level can only be crossed by a jump (continuity_possible = false).
struct Scenario {
  int drift_sign = +1;  ///< sign of kappa
  int level_sign = +1;  ///< sign of the level
  bool continuity_possible = true;
};

inline Scenario make_scenario(double kappa, double level) {
  Scenario sc;
  sc.drift_sign = kappa > 0 ? +1 : -1;
  sc.level_sign = level > 0 ? +1 : -1;
  sc.continuity_possible = !(level * kappa > 0);
  return sc;
}

/// Validate raw parameters and assemble a model.
///
/// Checks: kappa != 0, lambda > 0, p in (0,1], coefficient lists of matching
/// lengths, strictly increasing positive rates, unit mass on each side,
/// alpha_1 > 0 (and beta_1 > 0 when upward jumps exist), no vanishing
/// coefficient (which would degenerate a kernel exponent to zero), and
/// nonnegativity of both densities.  Nonnegativity is established by the
/// dominant-tail sign, a dense grid scan, and refinement of interior
/// critical points of the density.
///
/// Throws Error with kind NonDensity, BadOrdering, ZeroExponent or
/// ZeroDrift.
OUModel validate_model(double kappa, double lambda, double p,
                       std::vector<double> alphas, std::vector<double> mus,
                       std::vector<double> betas = {},
                       std::vector<double> nus = {});

/// Density of the jump law at u != 0: p*g_-(u) for u < 0, q*g_+(u) for u > 0.
double jump_density(const OUModel& model, double u);

/// Distribution function of the jump law,
///   G(u) = p * sum_k alpha_k e^{mu_k u}                 for u < 0,
///   G(u) = p + q * (1 - sum_d beta_d e^{-nu_d u})       for u >= 0.
double jump_cdf(const OUModel& model, double u);

/// Classify the kernel branch points (-nu_s, ..., -nu_1, 0, mu_1, ..., mu_r)
/// in increasing order.  Exponents: -q*lambda*beta_d/kappa at -nu_d, exactly
/// -1 at the origin, -p*lambda*alpha_k/kappa at mu_k.
std::vector<PointClass> classify_points(const OUModel& model);

/// Expected jump size, sum over both sides (used by samplers and sanity
/// tests): p * sum alpha_k * (-1/mu_k) + q * sum beta_d * (1/nu_d).
double jump_mean(const OUModel& model);

}  // namespace oujump

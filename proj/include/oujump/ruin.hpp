#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oujump/eigensystem.hpp"
#include "oujump/model.hpp"
#include "oujump/quadrature.hpp"

namespace oujump {

/// First-passage query: start the process at x and ask about the first
/// crossing of `level` from above, with Laplace argument `zeta` acting on
/// the undershoot Z = level - X_tau.
struct Query {
  double x = 1.0;
  double level = 0.0;
  double zeta = 0.0;
};

enum class RuinKind { LaplaceJump, RuinProb, SplitJump, SplitCont };

/// Numerical health attached to every headline value.
struct RuinDiagnostics {
  double condition = 0.0;   ///< worst linear-system condition encountered
  double quad_error = 0.0;  ///< worst relative quadrature error estimate
};

struct RuinResult {
  double value = 0.0;
  double imag_residual = 0.0;  ///< |Im| discarded by conjugate symmetrization
  RuinKind kind = RuinKind::RuinProb;
  RuinDiagnostics diagnostics;
  /// E^x[A_c] companion for queries where a continuous crossing is possible.
  std::optional<double> continuous_part;
};

/// E^x[e^{-zeta Z}; A_j], plus E^x[A_c] where a continuous crossing is
/// possible.  Scenario dispatch:
///   kappa>0, level>0: single eigenfunction, jump-only crossing;
///   kappa>0, level<0: eigenfunction pair, 2x2 solve for the two unknowns;
///   kappa<0, level<0: recurrent single eigenfunction, E^x[e^{-zeta Z}];
///   kappa<0, level>0: zeta=0 reduces to the recurrent split; zeta>0 is
///     UnsupportedScenario (needs a second eigenfunction family).
RuinResult laplace_undershoot(const OUModel& model, const Query& q,
                              const QuadratureConfig& config = {});

/// P^x(tau(level) < infinity).  Exact 1 for kappa<0 (recurrence); otherwise
/// assembled from the eigenfunction boundary values.
RuinResult ruin_probability(const OUModel& model, double x, double level,
                            const QuadratureConfig& config = {});

/// Crossing-type split (P(A_c), P(A_j)) for the recurrent case kappa<0.
/// For level<0 the flow points away from the level, so (0, 1) exactly.
std::pair<RuinResult, RuinResult> recurrent_split(
    const OUModel& model, double x, double level,
    const QuadratureConfig& config = {});

enum class Regime { XtoInf, LtoMinusInf, UndershootLimit };

/// A limit constant together with its normalizing function
///   XtoInf:        n(x) = exp(exp_rate*x) * x^power
///   LtoMinusInf:   n(l) = exp(exp_rate*l) * (-l)^power
///   UndershootLimit: n = 1.
struct AsymptoticResult {
  cplx constant{0.0, 0.0};
  Regime regime = Regime::XtoInf;
  double exp_rate = 0.0;
  double power = 0.0;
  /// Named reference-contour integrals / kernel evaluations the constant is
  /// assembled from, for reporting.
  std::vector<std::pair<std::string, cplx>> ingredients;

  double normalizer(double t) const;
};

/// The constant K with P^x(tau<infty) ~ K * normalizer(x) as x -> infinity
/// (kappa > 0).  The overloads taking pre-built eigenfunctions reuse their
/// solved coefficients; the convenience overload solves with zeta = 0.
AsymptoticResult asymptotic_K(const OUModel& model, double level,
                              const EigenfunctionPair& pair, double a = 1.0,
                              const QuadratureConfig& config = {});
AsymptoticResult asymptotic_K(const OUModel& model, double level,
                              const Eigenfunction& single, double a = 1.0,
                              const QuadratureConfig& config = {});
AsymptoticResult asymptotic_K(const OUModel& model, double level, double a = 1.0,
                              const QuadratureConfig& config = {});

/// Limit constant and normalizer for the level-weighted moment constant
/// N^{3k} on the window contour with signed index i, as level -> -infinity
/// (kappa > 0).  i in [-s, r], k in [1, r].
AsymptoticResult asymptotic_N3(const OUModel& model, int i, int k,
                               double a = 1.0,
                               const QuadratureConfig& config = {});

/// lim_{level -> -infinity} P^x(tau(level) < infinity) for kappa > 0 via the
/// determinant-ratio limit coefficients.  Ingredients carry the c_i.
AsymptoticResult limit_ruin_level(const OUModel& model, double x, double a = 1.0,
                                  const QuadratureConfig& config = {});

/// Finite-level diagnostics that should stabilize as level -> -infinity:
/// b0_times_f2 -> -1 and det_ratio -> 1.
struct LevelDiagnostics {
  cplx b0_times_f2{0.0, 0.0};
  cplx det_ratio{0.0, 0.0};
};
LevelDiagnostics level_asymptote_diagnostics(const OUModel& model, double level,
                                             const QuadratureConfig& config = {});

/// lim_{level -> -infinity} E^x[e^{-zeta Z}] = mu_1/(mu_1 + zeta) for
/// kappa < 0.
AsymptoticResult undershoot_limit(const OUModel& model, double zeta);

}  // namespace oujump

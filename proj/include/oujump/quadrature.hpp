#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oujump/contour.hpp"
#include "oujump/kernel.hpp"
#include "oujump/model.hpp"

namespace oujump {

/// Multiplicative weight attached to the branched kernel inside an integral:
///     w(z) = exp(-exp_rate * z) * 1/(z - pole)        (negated_pole false)
///     w(z) = exp(-exp_rate * z) * 1/(pole - z)        (negated_pole true)
/// Either part may be absent (exp_rate = 0, pole unset).
struct Weight {
  double exp_rate = 0.0;
  std::optional<double> pole;
  bool negated_pole = false;

  static Weight none() { return {}; }
  static Weight exponential(double rate) { return {rate, std::nullopt, false}; }
  static Weight pole_at(double p, bool negated = false) {
    return {0.0, p, negated};
  }
  static Weight exp_pole(double rate, double p, bool negated = false) {
    return {rate, p, negated};
  }
};

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_panels = 4000;   ///< adaptive subdivision budget per integral
  int initial_panels = 4;  ///< starting panels per transformed piece
};

/// Value of a contour integral, kept in scaled form value * exp(log_scale)
/// so that strongly damped integrands (weights exp(-l*z) with large |l|)
/// never overflow or underflow.
struct IntegralResult {
  cplx value{0.0, 0.0};    ///< scaled value
  double log_scale = 0.0;  ///< true integral = value * exp(log_scale)
  double error = 0.0;      ///< scaled absolute error estimate
  int panels = 0;          ///< panels used

  /// Unscaled value; only safe when |log_scale| is moderate.
  cplx unscaled() const { return value * std::exp(log_scale); }
};

/// Integrate psi(z) * w(z) dz over the contour, where psi is the branched
/// product described by `factors` continued along the path.  Throws
/// DivergentTail when a ray's integrand does not decay and NoConvergence
/// when the panel budget is exhausted before the tolerance is met.
IntegralResult integrate_factors(const BranchedFactors& factors,
                                 const Contour& contour, const Weight& weight,
                                 const QuadratureConfig& config = {});

/// Same with |psi(z) * w(z)| |dz| (real, nonnegative); used by the
/// integrability checks.
IntegralResult integrate_factors_abs(const BranchedFactors& factors,
                                     const Contour& contour, const Weight& weight,
                                     const QuadratureConfig& config = {});

/// Model-kernel integral: integrate_factors with the model's branch data.
IntegralResult integrate(const OUModel& model, const Contour& contour,
                         const Weight& weight,
                         const QuadratureConfig& config = {});

/// Scaling-limit integral  int z^{power} exp(sign * z) dz  over a reference
/// contour; sign must be -1 (damped to the right) or +1 (damped to the
/// left).  Used to pin the closed-form constants.
IntegralResult integrate_reference(const ReferenceContour& ref, double power,
                                   int sign, const QuadratureConfig& config = {});

/// Adaptive Gauss–Kronrod integration of a complex-valued function over a
/// finite real interval; used by the generator's jump integral.
cplx integrate_function(const std::function<cplx(double)>& f, double a, double b,
                        double rel_tol = 1e-9, double abs_tol = 1e-13,
                        int max_panels = 2000);

/// Which set of integrability conditions a contour must satisfy.
enum class ContourRole {
  SingleEigenfunction,  ///< whole-line eigenfunction, weights exp(-level*z)
  UpperPositive,        ///< first-recipe path for the positive half-line
  LevelWindow,          ///< second-recipe path for the window [level, 0)
  FiniteNegativeDrift,  ///< finite path for kappa < 0
};

struct ConditionItem {
  std::string name;
  double value = 0.0;  ///< the checked integral / endpoint magnitude
  bool pass = false;
};

struct ConditionReport {
  std::vector<ConditionItem> items;
  bool all_pass = true;
};

/// Numerically verify the absolute-integrability and endpoint-vanishing
/// conditions the construction imposes on a contour in the given role.
ConditionReport check_conditions(const OUModel& model, const Contour& contour,
                                 double level, ContourRole role,
                                 const QuadratureConfig& config = {});

}  // namespace oujump

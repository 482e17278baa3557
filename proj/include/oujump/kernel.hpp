#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "oujump/contour.hpp"
#include "oujump/model.hpp"

namespace oujump {

/// Product of real-axis branch factors (z - b_j)^{e_j}.  For the jump model
/// the points are (-nu_s, ..., -nu_1, 0, mu_1, ..., mu_r) with exponents
/// (-q*lambda*beta_d/kappa, ..., -1, -p*lambda*alpha_k/kappa, ...), so that
/// psi(z) = prod_j (z - b_j)^{e_j} solves the first-order equation attached
/// to the generator's eigenproblem.
struct BranchedFactors {
  std::vector<double> points;     ///< increasing branch-point locations
  std::vector<double> exponents;  ///< exponent carried by each point

  static BranchedFactors from_model(const OUModel& model);
  /// Sum of exponents at points coinciding with z0 (tolerance-matched).
  double exponent_at(double z0) const;
  /// Total exponent; |product| = O(|z|^{sum}) for large |z|.
  double total_exponent() const;
  /// Geometric scale 1 + max |b_j| used by tolerances.
  double scale() const;
};

/// Continuous determination of arg(z - b_j) along a fixed contour.
///
/// Branch arguments are initialized at the contour's anchor to principal
/// values in (-pi, pi] (if the anchor sits exactly on b_j, to the principal
/// argument of the outgoing piece direction) and propagated piece by piece
/// through the finite boundaries; each straight piece subtends less than a
/// half-turn relative to any point off it, so propagation by principal
/// arguments of endpoint ratios is exact.  A piece that touches b_j at one
/// endpoint carries a constant argument along its interior.
class BranchTracker {
 public:
  BranchTracker(const Contour& contour, BranchedFactors factors);

  const Contour& contour() const { return *contour_; }
  const BranchedFactors& factors() const { return factors_; }

  /// Continuous log of (z - b_j) at the given position.
  cplx log_factor(const PathPos& pos, std::size_t j) const;

  /// Sum_j e_j * log(z - b_j): the log of the branched product.
  /// Throws AtBranchPoint if z sits exactly on a point with e_j < 0.
  cplx log_product(const PathPos& pos) const;

  /// Same with the factor at `excluded` (tolerance-matched) left out.
  cplx log_product_excluding(const PathPos& pos, double excluded) const;

  /// Net argument change of (z - b_j) over the whole contour; -2*pi for a
  /// clockwise loop around b_j, 0 when b_j is outside a closed path.
  double winding(std::size_t j) const;

 private:
  const Contour* contour_;
  BranchedFactors factors_;
  // theta_[m][j] = continuous arg(B_m - b_j) at finite boundary m; boundary
  // m is the start of piece m, boundary n_pieces is the end of the last.
  std::vector<std::vector<double>> theta_;
  std::vector<cplx> boundaries_;      // B_m (finite entries only meaningful)
  std::vector<bool> boundary_finite_;
  double scale_ = 1.0;

  std::size_t ref_boundary(std::size_t piece) const;
};

/// Branched kernel value psi(z) = prod (z - b_j)^{e_j} along a contour.
cplx psi(const OUModel& model, const BranchTracker& tracker, const PathPos& pos);

/// Kernel with the factor at branch point b removed, evaluated on-contour.
cplx psi_excluding(const OUModel& model, double b, const BranchTracker& tracker,
                   const PathPos& pos);

/// Kernel with the factor at b removed, evaluated AT z = b on the real axis
/// with the upper-side determination: factors (b - p) with p > b contribute
/// |b - p|^{e_p} * exp(i*pi*e_p), factors with p < b are positive reals.
cplx psi_excluding_at(const OUModel& model, double b);

/// Kernel at one point using the principal logarithm of every factor;
/// agrees with the contour determinations away from the branch cuts.
/// Throws AtBranchPoint when z sits on a branch point with a negative
/// exponent; returns 0 when it sits on one with a positive exponent.
cplx psi_principal(const OUModel& model, cplx z);

/// Magnitude envelope |psi(z)| ~ |z|^{-1-lambda/|kappa|}; used for tail
/// truncation heuristics.
double psi_decay_exponent(const OUModel& model);

}  // namespace oujump

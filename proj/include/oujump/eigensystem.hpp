#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oujump/contour.hpp"
#include "oujump/model.hpp"
#include "oujump/quadrature.hpp"

namespace oujump {

/// A complex value carried together with a logarithmic scale so that moment
/// integrals with weights exp(-level*z) stay representable for large |level|.
struct ScaledComplex {
  cplx value{0.0, 0.0};
  double log_scale = 0.0;
  cplx unscaled() const { return value * std::exp(log_scale); }
};

/// The two contour families used to assemble coefficient systems:
/// `upper[i-1]` is the half-line contour attached to mu_i (i = 1..r) and
/// `level_paths[j+s]` the window contour attached to ordered branch point j
/// (signed j = -s..r).
struct ContourSet {
  std::vector<Contour> upper;
  std::vector<Contour> level_paths;
};

/// Builds both families with default vertices.
ContourSet default_contours(const OUModel& model);

/// Weighted contour integrals of the kernel.  M-constants live on the upper
/// contours, N-constants on the window contours; Mthm1 are the single-path
/// constants mu_k * int psi(z) e^{-level z}/(z - mu_k) dz.
struct MomentConstants {
  // upper contour i (1..r) -> row i-1
  std::vector<std::vector<cplx>> M1;  // [r][r], weight 1/(z - mu_k)
  std::vector<std::vector<cplx>> M2;  // [r][s], weight 1/(nu_d + z)
  // window contour signed j (-s..r) -> row j+s
  std::vector<std::vector<cplx>> N1;  // [r+s+1][r], weight 1/(mu_k - z)
  std::vector<std::vector<cplx>> N2;  // [r+s+1][s], weight 1/(nu_d + z)
  std::vector<std::vector<ScaledComplex>> N3;  // [r+s+1][r], e^{-level z}/(z-mu_k)
};

enum class MomentSet { UpperOnly, LevelOnly, All };

MomentConstants compute_moments(const OUModel& model, const ContourSet& contours,
                                double level, MomentSet which,
                                const QuadratureConfig& config = {});

/// Single-path constant of the whole-line construction:
/// mu_k * int_Gamma psi(z) e^{-level z} / (z - mu_k) dz.
ScaledComplex moment_single(const OUModel& model, const Contour& contour, int k,
                            double level, const QuadratureConfig& config = {});

/// Square complex system with provenance labels.
struct LinearSystem {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd rhs;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::string name;
};

/// Whole-line system: rows k = 1..r of sum_i c_i*Mthm1[i][k] = -mu_k/(mu_k+zeta)
/// over the supplied half-line contours (m = r of them).
LinearSystem assemble_theorem1(const OUModel& model, double level, double zeta,
                               const ContourSet& contours,
                               const QuadratureConfig& config = {});

/// Two-region systems for outward drift with a negative level; unknowns are
/// (c_1..c_r, b_{-s}..b_{r-1}) for the first and (c~, b~ over j=-s+1..r) for
/// the second.  Block rows: r of (0 | N3) with rhs -1/(mu_k+zeta), r of
/// (M1 | N1) with rhs 0, s of (-M2 | N2) with rhs 0.
LinearSystem assemble_A(const OUModel& model, double level, double zeta,
                        const ContourSet& contours,
                        const QuadratureConfig& config = {});
LinearSystem assemble_A_tilde(const OUModel& model, double level, double zeta,
                              const ContourSet& contours,
                              const QuadratureConfig& config = {});

/// Same two systems assembled from precomputed moment constants (avoids
/// re-integrating when several systems share one moment set).
LinearSystem assemble_A(const OUModel& model, double level, double zeta,
                        const MomentConstants& mc);
LinearSystem assemble_A_tilde(const OUModel& model, double level, double zeta,
                              const MomentConstants& mc);

/// Inward-drift system over the finite paths (i = 2..r): column 1 carries the
/// constant part (-1/mu_k), columns 2..r the finite-path constants, rhs
/// -1/(mu_k+zeta).  Unknowns (U, c_2..c_r).
LinearSystem assemble_B(const OUModel& model, double level, double zeta,
                        const std::vector<Contour>& finite_paths,
                        const QuadratureConfig& config = {});

struct SolveResult {
  Eigen::VectorXcd coefficients;
  double condition = 0.0;
  double residual = 0.0;  // max row-wise scaled residual
};

/// Equilibrated partial-pivoting solve with condition estimate and residual
/// verification.  Throws IllConditioned above the 1e12 threshold and
/// SingularSystem on rank deficiency.
SolveResult solve(const LinearSystem& system);

/// Minimum-norm solve for systems that are consistent but rank-deficient.
///
/// The second two-region system carries an exact column dependence for every
/// model with upward jumps: its top window contour can be pushed to +infinity
/// (so the level-free rows of that column vanish), and each remaining window
/// wedge shares its level-free row entries with the upper wedge at the next
/// base point up, with opposite sign.  The right-hand side stays in the range
/// of the matrix, and the crossing functionals extracted downstream are
/// invariant under the null direction, so any exact solution is equally
/// valid; the pseudoinverse solution is the reproducible choice.
///
/// Directions with singular value below 1e-11 * sigma_max are truncated.
/// The residual of the returned solution is verified against the original
/// system; failure (an inconsistent right-hand side) throws SingularSystem.
/// The reported condition uses the smallest retained singular value.
SolveResult solve_min_norm(const LinearSystem& system);

/// Piecewise eigenfunction: value at y is the sum of the active groups,
///   upper_terms   (coefficient * int psi e^{-yz} dz)  for y >= 0,
///   window_terms  likewise                            for level <= y < 0,
///   whole_terms   likewise                            for y >= level,
///   constant_U                                        for y >= level,
///   f0:            e^{-zeta(level-y)}                   for y < level.
struct Eigenfunction {
  OUModel model;
  double zeta = 0.0;
  double level = 0.0;
  Scenario scenario;
  std::vector<std::pair<cplx, Contour>> upper_terms;
  std::vector<std::pair<cplx, Contour>> window_terms;
  std::vector<std::pair<cplx, Contour>> whole_terms;
  cplx constant_U{0.0, 0.0};
  bool include_f0 = true;
  QuadratureConfig quad;
  double condition = 0.0;  // condition number of the system that built it
};

cplx eval_eigenfunction(const Eigenfunction& f, double y);

/// One term int psi(z) e^{-yz} dz over a single contour (no coefficients).
cplx eval_contour_term(const OUModel& model, const Contour& contour, double y,
                       const QuadratureConfig& config = {});

/// Assembled eigenfunctions per scenario.
Eigenfunction build_single_eigenfunction(const OUModel& model, double level,
                                         double zeta,
                                         const QuadratureConfig& config = {});
struct EigenfunctionPair {
  Eigenfunction f1, f2;
};
EigenfunctionPair build_eigenfunction_pair(const OUModel& model, double level,
                                           double zeta,
                                           const QuadratureConfig& config = {});
Eigenfunction build_recurrent_eigenfunction(const OUModel& model, double level,
                                            double zeta,
                                            const QuadratureConfig& config = {});

struct GeneratorConfig {
  double h_scale = 1e-4;        ///< stencil step = h_scale * max(1, |y|)
  double kink_margin = 10.0;    ///< NearKink within kink_margin * h of junctions
  double rel_tol = 1e-8;        ///< jump-integral tolerance
  double upward_span = 45.0;    ///< truncate upward integral at span / nu_1
};

/// Numeric generator image  kappa*y*f'(y) + lambda*int (f(y+u)-f(y)) G(du)
/// for an arbitrary evaluable f.  `junctions` lists the points where f is not
/// smooth (the eigenfunctions break at level and 0); y within
/// kink_margin*h of any junction throws NearKink.
cplx apply_generator(const OUModel& model, const std::function<cplx(double)>& f,
                     double y, const std::vector<double>& junctions = {},
                     const GeneratorConfig& config = {});

/// Generator applied to an assembled eigenfunction, with the analytic
/// below-level tail (the f0 region integrates in closed form) and the
/// junction list filled in automatically.
cplx apply_generator(const OUModel& model, const Eigenfunction& f, double y,
                     const GeneratorConfig& config = {});

/// The same application together with the magnitude of the generator's own
/// parts, |drift| + lambda*(|f(y)| + |averaged f|); annihilation residuals
/// are judged relative to the largest such scale over an evaluation grid.
struct GeneratorApplication {
  cplx value{0.0, 0.0};
  double scale = 0.0;
};
GeneratorApplication apply_generator_scaled(const OUModel& model,
                                            const Eigenfunction& f, double y,
                                            const GeneratorConfig& config = {});

/// log-determinant (log|det|, arg det) via partial-pivoting LU; used by the
/// determinant-ratio diagnostics where raw determinants overflow.
std::pair<double, double> log_determinant(const Eigen::MatrixXcd& m);

/// Closed-form generator images of the individual building blocks.  Applying
/// the generator to one contour term produces a finite mixture of the model
/// exponentials whose coefficients are the moment constants; these are the
/// identities that make the assembled linear systems annihilate the
/// generator.  All three take the same moment set used to assemble the
/// systems.  `i` is the 1-based upper-contour index; `j` the signed window
/// index; `level` and `zeta` as in the eigenfunction.
///
/// upper term  (support y >= 0):
///   y >= 0:          p lam sum_k alpha_k mu_k M1[i][k] e^{-mu_k y}
///   level <= y < 0:  q lam sum_d beta_d nu_d M2[i][d] e^{nu_d y}
/// window term (support level <= y < 0):
///   y >= 0:          p lam sum_k alpha_k mu_k (N1[j][k] + e^{mu_k level} N3[j][k]) e^{-mu_k y}
///   level <= y < 0:  -q lam sum_d beta_d nu_d N2[j][d] e^{nu_d y}
///                    + p lam sum_k alpha_k mu_k N3[j][k] e^{mu_k level} e^{-mu_k y}
/// below-level tail (support y < level, value e^{-zeta(level-y)}):
///   y >= level:      p lam sum_k alpha_k mu_k e^{mu_k(level-y)} / (mu_k + zeta)
cplx generator_image_upper(const OUModel& model, const MomentConstants& mc,
                           int i, double level, double y);
cplx generator_image_window(const OUModel& model, const MomentConstants& mc,
                            int j, double level, double y);
cplx generator_image_tail(const OUModel& model, double level, double zeta,
                          double y);

}  // namespace oujump

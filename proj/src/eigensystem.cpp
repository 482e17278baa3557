#include "oujump/eigensystem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oujump/errors.hpp"

namespace oujump {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

cplx unscale_checked(const IntegralResult& r, const std::string& context) {
  if (r.log_scale > 690.0) {
    throw Error(ErrorKind::IllConditioned,
                "moment constant overflows double range: " + context);
  }
  if (r.log_scale < -745.0) return cplx(0.0, 0.0);
  return r.unscaled();
}

}  // namespace

ContourSet default_contours(const OUModel& model) {
  ContourSet cs;
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  cs.upper.reserve(r);
  for (int i = 1; i <= r; ++i) cs.upper.push_back(build_gamma_positive(model, i));
  cs.level_paths.reserve(r + s + 1);
  for (int j = -s; j <= r; ++j) cs.level_paths.push_back(build_gamma_level(model, j));
  return cs;
}

MomentConstants compute_moments(const OUModel& model, const ContourSet& contours,
                                double level, MomentSet which,
                                const QuadratureConfig& config) {
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  MomentConstants mc;
  if (which == MomentSet::UpperOnly || which == MomentSet::All) {
    if (static_cast<int>(contours.upper.size()) != r) {
      throw Error(ErrorKind::BadIndex, "expected r upper contours");
    }
    mc.M1.assign(r, std::vector<cplx>(r));
    mc.M2.assign(r, std::vector<cplx>(s));
    for (int i = 0; i < r; ++i) {
      for (int k = 1; k <= r; ++k) {
        mc.M1[i][k - 1] =
            unscale_checked(integrate(model, contours.upper[i],
                                      Weight::pole_at(model.mu(k)), config),
                            "M1 on " + contours.upper[i].label);
      }
      for (int d = 1; d <= s; ++d) {
        mc.M2[i][d - 1] =
            unscale_checked(integrate(model, contours.upper[i],
                                      Weight::pole_at(-model.nu(d)), config),
                            "M2 on " + contours.upper[i].label);
      }
    }
  }
  if (which == MomentSet::LevelOnly || which == MomentSet::All) {
    if (static_cast<int>(contours.level_paths.size()) != r + s + 1) {
      throw Error(ErrorKind::BadIndex, "expected r+s+1 window contours");
    }
    mc.N1.assign(r + s + 1, std::vector<cplx>(r));
    mc.N2.assign(r + s + 1, std::vector<cplx>(s));
    mc.N3.assign(r + s + 1, std::vector<ScaledComplex>(r));
    for (int row = 0; row < r + s + 1; ++row) {
      const Contour& c = contours.level_paths[row];
      for (int k = 1; k <= r; ++k) {
        mc.N1[row][k - 1] = unscale_checked(
            integrate(model, c, Weight::pole_at(model.mu(k), true), config),
            "N1 on " + c.label);
        const IntegralResult n3 =
            integrate(model, c, Weight::exp_pole(level, model.mu(k)), config);
        mc.N3[row][k - 1] = ScaledComplex{n3.value, n3.log_scale};
      }
      for (int d = 1; d <= s; ++d) {
        mc.N2[row][d - 1] = unscale_checked(
            integrate(model, c, Weight::pole_at(-model.nu(d)), config),
            "N2 on " + c.label);
      }
    }
  }
  return mc;
}

ScaledComplex moment_single(const OUModel& model, const Contour& contour, int k,
                            double level, const QuadratureConfig& config) {
  const IntegralResult r =
      integrate(model, contour, Weight::exp_pole(level, model.mu(k)), config);
  return ScaledComplex{r.value * model.mu(k), r.log_scale};
}

LinearSystem assemble_theorem1(const OUModel& model, double level, double zeta,
                               const ContourSet& contours,
                               const QuadratureConfig& config) {
  const int r = static_cast<int>(model.r());
  if (static_cast<int>(contours.upper.size()) != r) {
    throw Error(ErrorKind::BadIndex,
                "whole-line system needs exactly r contours");
  }
  LinearSystem sys;
  sys.name = "whole-line system (level " + fmt(level) + ")";
  sys.matrix.resize(r, r);
  sys.rhs.resize(r);
  for (int k = 1; k <= r; ++k) {
    for (int i = 0; i < r; ++i) {
      const ScaledComplex m = moment_single(model, contours.upper[i], k, level, config);
      if (m.log_scale > 690.0) {
        throw Error(ErrorKind::IllConditioned,
                    "system entry overflows: " + contours.upper[i].label);
      }
      sys.matrix(k - 1, i) = m.unscaled();
    }
    sys.rhs(k - 1) = -model.mu(k) / (model.mu(k) + zeta);
    sys.row_labels.push_back("moment row k=" + std::to_string(k));
  }
  for (int i = 1; i <= r; ++i) sys.col_labels.push_back("c_" + std::to_string(i));
  return sys;
}

namespace {

LinearSystem assemble_two_region_from(const OUModel& model, double level,
                                      double zeta, const MomentConstants& mc,
                                      int j_lo, int j_hi,
                                      const std::string& name) {
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  const int n = 2 * r + s;
  LinearSystem sys;
  sys.name = name + " (level " + fmt(level) + ")";
  sys.matrix = Eigen::MatrixXcd::Zero(n, n);
  sys.rhs = Eigen::VectorXcd::Zero(n);

  for (int i = 1; i <= r; ++i) sys.col_labels.push_back("c_" + std::to_string(i));
  for (int j = j_lo; j <= j_hi; ++j) {
    sys.col_labels.push_back("b_" + std::to_string(j));
  }

  // Block 1: rows k = 1..r of sum_j b_j N3 = -1/(mu_k + zeta).
  for (int k = 1; k <= r; ++k) {
    const int row = k - 1;
    for (int j = j_lo; j <= j_hi; ++j) {
      const ScaledComplex& e = mc.N3[j + s][k - 1];
      if (e.log_scale > 690.0) {
        throw Error(ErrorKind::IllConditioned,
                    "level-weighted entry overflows at level " + fmt(level));
      }
      sys.matrix(row, r + (j - j_lo)) = e.unscaled();
    }
    sys.rhs(row) = -1.0 / (model.mu(k) + zeta);
    sys.row_labels.push_back("level row k=" + std::to_string(k));
  }
  // Block 2: rows of sum_i c_i M1 + sum_j b_j N1 = 0.
  for (int k = 1; k <= r; ++k) {
    const int row = r + k - 1;
    for (int i = 0; i < r; ++i) sys.matrix(row, i) = mc.M1[i][k - 1];
    for (int j = j_lo; j <= j_hi; ++j) {
      sys.matrix(row, r + (j - j_lo)) = mc.N1[j + s][k - 1];
    }
    sys.row_labels.push_back("down-matching row k=" + std::to_string(k));
  }
  // Block 3: rows of sum_i c_i (-M2) + sum_j b_j N2 = 0.
  for (int d = 1; d <= s; ++d) {
    const int row = 2 * r + d - 1;
    for (int i = 0; i < r; ++i) sys.matrix(row, i) = -mc.M2[i][d - 1];
    for (int j = j_lo; j <= j_hi; ++j) {
      sys.matrix(row, r + (j - j_lo)) = mc.N2[j + s][d - 1];
    }
    sys.row_labels.push_back("up-matching row d=" + std::to_string(d));
  }
  return sys;
}

void require_two_region(const OUModel& model, double level) {
  if (model.kappa <= 0.0 || level >= 0.0) {
    throw Error(ErrorKind::BadScenario,
                "two-region system needs outward drift and a negative level");
  }
}

}  // namespace

LinearSystem assemble_A(const OUModel& model, double level, double zeta,
                        const ContourSet& contours,
                        const QuadratureConfig& config) {
  require_two_region(model, level);
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  const MomentConstants mc =
      compute_moments(model, contours, level, MomentSet::All, config);
  return assemble_two_region_from(model, level, zeta, mc, -s, r - 1,
                                  "two-region system A");
}

LinearSystem assemble_A_tilde(const OUModel& model, double level, double zeta,
                              const ContourSet& contours,
                              const QuadratureConfig& config) {
  require_two_region(model, level);
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  const MomentConstants mc =
      compute_moments(model, contours, level, MomentSet::All, config);
  return assemble_two_region_from(model, level, zeta, mc, -s + 1, r,
                                  "two-region system A~");
}

LinearSystem assemble_A(const OUModel& model, double level, double zeta,
                        const MomentConstants& mc) {
  require_two_region(model, level);
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  return assemble_two_region_from(model, level, zeta, mc, -s, r - 1,
                                  "two-region system A");
}

LinearSystem assemble_A_tilde(const OUModel& model, double level, double zeta,
                              const MomentConstants& mc) {
  require_two_region(model, level);
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  return assemble_two_region_from(model, level, zeta, mc, -s + 1, r,
                                  "two-region system A~");
}

LinearSystem assemble_B(const OUModel& model, double level, double zeta,
                        const std::vector<Contour>& finite_paths,
                        const QuadratureConfig& config) {
  const int r = static_cast<int>(model.r());
  if (model.kappa >= 0.0) {
    throw Error(ErrorKind::BadScenario, "inward-drift system needs kappa < 0");
  }
  if (static_cast<int>(finite_paths.size()) != r - 1) {
    throw Error(ErrorKind::BadIndex,
                "inward-drift system needs r-1 finite paths");
  }
  LinearSystem sys;
  sys.name = "inward-drift system (level " + fmt(level) + ")";
  sys.matrix.resize(r, r);
  sys.rhs.resize(r);
  sys.col_labels.push_back("U");
  for (int i = 2; i <= r; ++i) sys.col_labels.push_back("c_" + std::to_string(i));
  for (int k = 1; k <= r; ++k) {
    sys.matrix(k - 1, 0) = cplx(-1.0 / model.mu(k), 0.0);
    for (int i = 2; i <= r; ++i) {
      const IntegralResult e =
          integrate(model, finite_paths[i - 2],
                    Weight::exp_pole(level, model.mu(k)), config);
      sys.matrix(k - 1, i - 1) =
          unscale_checked(e, "finite-path entry on " + finite_paths[i - 2].label);
    }
    sys.rhs(k - 1) = -1.0 / (model.mu(k) + zeta);
    sys.row_labels.push_back("moment row k=" + std::to_string(k));
  }
  return sys;
}

namespace {

SolveResult solve_impl(const LinearSystem& system, bool allow_deficiency) {
  const Eigen::Index n = system.matrix.rows();
  if (n == 0 || system.matrix.cols() != n || system.rhs.size() != n) {
    throw Error(ErrorKind::BadIndex, "malformed linear system " + system.name);
  }
  // Row/column equilibration keeps the exponentially disparate block scales
  // from poisoning the factorization.
  Eigen::VectorXd row_scale(n), col_scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = system.matrix.row(i).cwiseAbs().maxCoeff();
    if (m == 0.0 || !std::isfinite(m)) {
      throw Error(ErrorKind::SingularSystem,
                  "degenerate row in " + system.name + ": " +
                      (i < static_cast<Eigen::Index>(system.row_labels.size())
                           ? system.row_labels[i]
                           : std::to_string(i)));
    }
    row_scale(i) = m;
  }
  Eigen::MatrixXcd a = row_scale.cwiseInverse().asDiagonal() * system.matrix;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double m = a.col(j).cwiseAbs().maxCoeff();
    if (m == 0.0 || !std::isfinite(m)) {
      throw Error(ErrorKind::SingularSystem,
                  "degenerate column in " + system.name + ": " +
                      (j < static_cast<Eigen::Index>(system.col_labels.size())
                           ? system.col_labels[j]
                           : std::to_string(j)));
    }
    col_scale(j) = m;
  }
  a = a * col_scale.cwiseInverse().asDiagonal();

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a,
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(n - 1);
  const Eigen::VectorXcd b1 = system.rhs.cwiseQuotient(row_scale.cast<cplx>());
  Eigen::VectorXcd x;
  double cond = 0.0;

  if (!allow_deficiency) {
    if (smin <= 0.0) {
      throw Error(ErrorKind::SingularSystem,
                  "rank-deficient system " + system.name);
    }
    cond = smax / smin;
    if (cond > 1e12) {
      throw Error(ErrorKind::IllConditioned,
                  system.name + " condition estimate " + fmt(cond));
    }
    x = svd.solve(b1);
  } else {
    // Truncated pseudoinverse: directions below the cut are treated as an
    // exact dependence and dropped, giving the minimum-norm solution.  The
    // residual check below rejects a right-hand side outside the range.
    const double cut = 1e-11 * smax;
    Eigen::Index rank = 0;
    while (rank < n && svd.singularValues()(rank) > cut) ++rank;
    if (rank == 0) {
      throw Error(ErrorKind::SingularSystem,
                  "zero-rank system " + system.name);
    }
    cond = smax / svd.singularValues()(rank - 1);
    const Eigen::VectorXcd u = svd.matrixU().leftCols(rank).adjoint() * b1;
    const Eigen::VectorXcd w =
        u.cwiseQuotient(svd.singularValues().head(rank).cast<cplx>());
    x = svd.matrixV().leftCols(rank) * w;
  }
  x = x.cwiseQuotient(col_scale.cast<cplx>());

  // Row-wise residual verification against the original system.  Every
  // entry carries an absolute noise floor of order eps * (row scale) from
  // the quadrature that produced it; with solution components spanning many
  // orders of magnitude the row product |A_i| |x| can sit far below that
  // floor, so it enters the bound explicitly.
  const Eigen::VectorXcd resid = system.matrix * x - system.rhs;
  const double x_l1 = x.cwiseAbs().sum();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                               row_scale(i) * x_l1;
    const double bound =
        1e-10 * (system.matrix.row(i).cwiseAbs().dot(x.cwiseAbs().transpose()) +
                 std::abs(system.rhs(i))) +
        noise_floor;
    const double rr = std::abs(resid(i));
    worst = std::max(worst, bound > 0 ? rr / (bound / 1e-10) : rr);
    if (rr > bound && rr > 1e-300) {
      throw Error(allow_deficiency ? ErrorKind::SingularSystem
                                   : ErrorKind::IllConditioned,
                  "residual verification failed on row " +
                      (i < static_cast<Eigen::Index>(system.row_labels.size())
                           ? system.row_labels[i]
                           : std::to_string(i)) +
                      " of " + system.name);
    }
  }
  return SolveResult{x, cond, worst};
}

}  // namespace

SolveResult solve(const LinearSystem& system) {
  return solve_impl(system, false);
}

SolveResult solve_min_norm(const LinearSystem& system) {
  return solve_impl(system, true);
}

cplx eval_contour_term(const OUModel& model, const Contour& contour, double y,
                       const QuadratureConfig& config) {
  const IntegralResult r =
      integrate(model, contour, Weight::exponential(y), config);
  return unscale_checked(r, "eigenfunction term on " + contour.label);
}

cplx eval_eigenfunction(const Eigenfunction& f, double y) {
  if (y < f.level) {
    return f.include_f0 ? cplx(std::exp(-f.zeta * (f.level - y)), 0.0)
                        : cplx(0.0, 0.0);
  }
  cplx v = f.constant_U;
  for (const auto& [coef, contour] : f.whole_terms) {
    v += coef * eval_contour_term(f.model, contour, y, f.quad);
  }
  if (y >= 0.0) {
    for (const auto& [coef, contour] : f.upper_terms) {
      v += coef * eval_contour_term(f.model, contour, y, f.quad);
    }
  } else {
    for (const auto& [coef, contour] : f.window_terms) {
      v += coef * eval_contour_term(f.model, contour, y, f.quad);
    }
  }
  return v;
}

Eigenfunction build_single_eigenfunction(const OUModel& model, double level,
                                         double zeta,
                                         const QuadratureConfig& config) {
  if (zeta < 0.0) {
    throw Error(ErrorKind::BadScenario, "transform argument must be >= 0");
  }
  if (model.kappa > 0.0 && level <= 0.0) {
    throw Error(ErrorKind::BadScenario,
                "outward drift with a non-positive level needs the paired "
                "construction");
  }
  if (model.kappa < 0.0 && level <= 0.0) {
    return build_recurrent_eigenfunction(model, level, zeta, config);
  }
  ContourSet cs;
  const int r = static_cast<int>(model.r());
  for (int i = 1; i <= r; ++i) cs.upper.push_back(build_gamma_positive(model, i));
  LinearSystem sys = assemble_theorem1(model, level, zeta, cs, config);
  SolveResult sol = solve(sys);
  Eigenfunction f;
  f.model = model;
  f.zeta = zeta;
  f.level = level;
  f.scenario = make_scenario(model.kappa, level);
  for (int i = 0; i < r; ++i) f.whole_terms.emplace_back(sol.coefficients(i), cs.upper[i]);
  f.quad = config;
  f.condition = sol.condition;
  return f;
}

EigenfunctionPair build_eigenfunction_pair(const OUModel& model, double level,
                                           double zeta,
                                           const QuadratureConfig& config) {
  if (!(model.kappa > 0.0) || !(level < 0.0)) {
    throw Error(ErrorKind::BadScenario,
                "paired construction needs outward drift and a negative level");
  }
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  const ContourSet cs = default_contours(model);

  auto build = [&](const LinearSystem& sys, int j_lo, int j_hi) {
    // The second window set {j_lo..r} carries an exact column dependence
    // (see solve_min_norm); the first set {-s..r-1} is generically regular.
    SolveResult sol = (j_hi == r) ? solve_min_norm(sys) : solve(sys);
    Eigenfunction f;
    f.model = model;
    f.zeta = zeta;
    f.level = level;
    f.scenario = make_scenario(model.kappa, level);
    for (int i = 0; i < r; ++i) {
      f.upper_terms.emplace_back(sol.coefficients(i), cs.upper[i]);
    }
    for (int j = j_lo; j <= j_hi; ++j) {
      f.window_terms.emplace_back(sol.coefficients(r + (j - j_lo)),
                                  cs.level_paths[j + s]);
    }
    f.quad = config;
    f.condition = sol.condition;
    return f;
  };

  const MomentConstants mc =
      compute_moments(model, cs, level, MomentSet::All, config);
  EigenfunctionPair pair{
      build(assemble_two_region_from(model, level, zeta, mc, -s, r - 1,
                                     "two-region system A"),
            -s, r - 1),
      build(assemble_two_region_from(model, level, zeta, mc, -s + 1, r,
                                     "two-region system A~"),
            -s + 1, r)};
  return pair;
}

Eigenfunction build_recurrent_eigenfunction(const OUModel& model, double level,
                                            double zeta,
                                            const QuadratureConfig& config) {
  if (!(model.kappa < 0.0)) {
    throw Error(ErrorKind::BadScenario, "recurrent construction needs kappa < 0");
  }
  if (zeta < 0.0) {
    throw Error(ErrorKind::BadScenario, "transform argument must be >= 0");
  }
  const int r = static_cast<int>(model.r());
  std::vector<Contour> paths;
  for (int i = 2; i <= r; ++i) {
    paths.push_back(build_gamma_finite(model, i, level, 1.0));
  }
  LinearSystem sys = assemble_B(model, level, zeta, paths, config);
  SolveResult sol = solve(sys);
  Eigenfunction f;
  f.model = model;
  f.zeta = zeta;
  f.level = level;
  f.scenario = make_scenario(model.kappa, level);
  f.constant_U = sol.coefficients(0);
  for (int i = 2; i <= r; ++i) {
    f.whole_terms.emplace_back(sol.coefficients(i - 1), paths[i - 2]);
  }
  f.quad = config;
  f.condition = sol.condition;
  return f;
}

cplx generator_image_upper(const OUModel& model, const MomentConstants& mc,
                           int i, double level, double y) {
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  if (i < 1 || i > r) {
    throw Error(ErrorKind::BadIndex, "upper contour index out of range");
  }
  cplx out{0.0, 0.0};
  if (y >= 0.0) {
    for (int k = 1; k <= r; ++k) {
      out += model.jumps.p * model.lambda * model.alpha(k) * model.mu(k) *
             mc.M1[i - 1][k - 1] * std::exp(-model.mu(k) * y);
    }
  } else if (y >= level) {
    for (int d = 1; d <= s; ++d) {
      out += model.jumps.q() * model.lambda * model.beta(d) * model.nu(d) *
             mc.M2[i - 1][d - 1] * std::exp(model.nu(d) * y);
    }
  }
  return out;
}

cplx generator_image_window(const OUModel& model, const MomentConstants& mc,
                            int j, double level, double y) {
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  if (j < -s || j > r) {
    throw Error(ErrorKind::BadIndex, "window contour index out of range");
  }
  const int row = j + s;
  cplx out{0.0, 0.0};
  if (y >= 0.0) {
    for (int k = 1; k <= r; ++k) {
      const ScaledComplex& n3 = mc.N3[row][k - 1];
      // e^{mu_k level} N3 stays O(1); combine the exponents before exp.
      const cplx lifted =
          n3.value * std::exp(n3.log_scale + model.mu(k) * level);
      out += model.jumps.p * model.lambda * model.alpha(k) * model.mu(k) *
             (mc.N1[row][k - 1] + lifted) * std::exp(-model.mu(k) * y);
    }
  } else if (y >= level) {
    for (int d = 1; d <= s; ++d) {
      out -= model.jumps.q() * model.lambda * model.beta(d) * model.nu(d) *
             mc.N2[row][d - 1] * std::exp(model.nu(d) * y);
    }
    for (int k = 1; k <= r; ++k) {
      const ScaledComplex& n3 = mc.N3[row][k - 1];
      const cplx lifted =
          n3.value * std::exp(n3.log_scale + model.mu(k) * (level - y));
      out += model.jumps.p * model.lambda * model.alpha(k) * model.mu(k) * lifted;
    }
  }
  return out;
}

cplx generator_image_tail(const OUModel& model, double level, double zeta,
                          double y) {
  if (y < level) {
    throw Error(ErrorKind::BadIndex,
                "tail image applies at or above the level");
  }
  const int r = static_cast<int>(model.r());
  cplx out{0.0, 0.0};
  for (int k = 1; k <= r; ++k) {
    out += model.jumps.p * model.lambda * model.alpha(k) * model.mu(k) *
           std::exp(model.mu(k) * (level - y)) / (model.mu(k) + zeta);
  }
  return out;
}

namespace {

// Breakpoints of [lo, hi] at the listed interior points, returned as a
// sorted segment list.
std::vector<std::pair<double, double>> split_interval(
    double lo, double hi, const std::vector<double>& cuts) {
  std::vector<double> pts{lo, hi};
  for (double c : cuts) {
    if (c > lo + 1e-14 && c < hi - 1e-14) pts.push_back(c);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i]) out.emplace_back(pts[i], pts[i + 1]);
  }
  return out;
}

cplx five_point_derivative(const std::function<cplx(double)>& f, double y,
                           double h) {
  return (-f(y + 2.0 * h) + 8.0 * f(y + h) - 8.0 * f(y - h) + f(y - 2.0 * h)) /
         (12.0 * h);
}

void check_kink(const std::vector<double>& junctions, double y, double h,
                double margin) {
  for (double j : junctions) {
    if (std::abs(y - j) < margin * h) {
      throw Error(ErrorKind::NearKink,
                  "evaluation point " + fmt(y) + " within stencil range of " +
                      fmt(j));
    }
  }
}

}  // namespace

cplx apply_generator(const OUModel& model, const std::function<cplx(double)>& f,
                     double y, const std::vector<double>& junctions,
                     const GeneratorConfig& config) {
  const double h = config.h_scale * std::max(1.0, std::abs(y));
  check_kink(junctions, y, h, config.kink_margin);
  const cplx fp = five_point_derivative(f, y, h);
  const cplx fy = f(y);

  std::vector<double> cuts;
  for (double j : junctions) cuts.push_back(j - y);

  cplx jump(0.0, 0.0);
  if (model.r() > 0) {
    const double down_span = config.upward_span / model.mu(1);
    for (auto [a, b] : split_interval(-down_span, 0.0, cuts)) {
      jump += integrate_function(
          [&](double u) { return (f(y + u) - fy) * jump_density(model, u); }, a,
          b, config.rel_tol, 1e-14);
    }
  }
  if (model.s() > 0) {
    const double up_span = config.upward_span / model.nu(1);
    for (auto [a, b] : split_interval(0.0, up_span, cuts)) {
      jump += integrate_function(
          [&](double u) { return (f(y + u) - fy) * jump_density(model, u); }, a,
          b, config.rel_tol, 1e-14);
    }
  }
  return model.kappa * y * fp + model.lambda * jump;
}

cplx apply_generator(const OUModel& model, const Eigenfunction& f, double y,
                     const GeneratorConfig& config) {
  const std::vector<double> junctions{f.level, 0.0};
  if (y < f.level) {
    return apply_generator(
        model, [&](double w) { return eval_eigenfunction(f, w); }, y, junctions,
        config);
  }
  const double h = config.h_scale * std::max(1.0, std::abs(y));
  check_kink(junctions, y, h, config.kink_margin);

  auto ev = [&](double w) { return eval_eigenfunction(f, w); };
  const cplx fp = five_point_derivative(ev, y, h);
  const cplx fy = ev(y);

  // Below-level tail in closed form: with f0(w) = e^{-zeta(level-w)} there,
  // int_{-inf}^{level-y} f0(y+u) p g_-(u) du = p sum_k a_k m_k
  // e^{m_k(level-y)}/(m_k+zeta); the -f(y) part integrates the exact left
  // tail mass of the jump law.
  const double c = f.level - y;
  cplx jump(0.0, 0.0);
  if (f.include_f0) {
    double tail = 0.0;
    for (int k = 1; k <= model.r(); ++k) {
      tail += model.alpha(k) * model.mu(k) *
              std::exp(model.mu(k) * c) / (model.mu(k) + f.zeta);
    }
    jump += model.jumps.p * tail;
  }
  jump -= fy * jump_cdf(model, c);

  std::vector<double> cuts;
  for (double j : junctions) cuts.push_back(j - y);
  for (auto [a, b] : split_interval(c, 0.0, cuts)) {
    jump += integrate_function(
        [&](double u) { return ev(y + u) * jump_density(model, u); }, a, b,
        config.rel_tol, 1e-14);
  }
  // Between c and 0 the -f(y) mass was folded into jump_cdf above only for
  // u < c; subtract the remaining window and upward masses explicitly.
  jump -= fy * (jump_cdf(model, 0.0) - jump_cdf(model, c));
  if (model.s() > 0) {
    const double up_span = config.upward_span / model.nu(1);
    for (auto [a, b] : split_interval(0.0, up_span, cuts)) {
      jump += integrate_function(
          [&](double u) { return (ev(y + u) - fy) * jump_density(model, u); },
          a, b, config.rel_tol, 1e-14);
    }
  }
  return model.kappa * y * fp + model.lambda * jump;
}

GeneratorApplication apply_generator_scaled(const OUModel& model,
                                            const Eigenfunction& f, double y,
                                            const GeneratorConfig& config) {
  auto ev = [&](double w) { return eval_eigenfunction(f, w); };
  const double h = config.h_scale * std::max(1.0, std::abs(y));
  const cplx total = apply_generator(model, f, y, config);
  const cplx fp = five_point_derivative(ev, y, h);
  const cplx fy = ev(y);
  const cplx drift = model.kappa * y * fp;
  // int f(y+u) G(du), reconstructed from the compensated jump part.
  const cplx averaged = (total - drift) / model.lambda + fy;
  GeneratorApplication out;
  out.value = total;
  out.scale = std::abs(drift) +
              model.lambda * (std::abs(fy) + std::abs(averaged));
  return out;
}

std::pair<double, double> log_determinant(const Eigen::MatrixXcd& m) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  const auto& diag = lu.matrixLU().diagonal();
  double log_abs = 0.0;
  double arg = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    log_abs += std::log(std::abs(diag(i)));
    arg += std::arg(diag(i));
  }
  if (lu.permutationP().determinant() < 0) arg += M_PI;
  // Fold the argument into (-pi, pi].
  arg = std::remainder(arg, 2.0 * M_PI);
  if (arg <= -M_PI) arg += 2.0 * M_PI;
  return {log_abs, arg};
}

}  // namespace oujump

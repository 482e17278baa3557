#include "oujump/ruin.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "oujump/contour.hpp"
#include "oujump/errors.hpp"
#include "oujump/kernel.hpp"

namespace oujump {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_query(double x, double level, double zeta) {
  if (!(x > level)) {
    throw Error(ErrorKind::BadScenario,
                "start point must lie strictly above the level");
  }
  if (level == 0.0) {
    throw Error(ErrorKind::BadScenario,
                "level must be nonzero (branch point sits at the level)");
  }
  if (zeta < 0.0) {
    throw Error(ErrorKind::BadConfig, "transform argument must be >= 0");
  }
}

void check_denominator(const cplx& den, double scale, const char* what) {
  if (std::abs(den) <= 1e-12 * std::max(1.0, scale)) {
    throw Error(ErrorKind::DegenerateDenominator, what);
  }
}

/// Boundary classification by signed index i in [-s, r]:
/// i >= 1 -> mu_i, i == 0 -> origin, i <= -1 -> -nu_{-i}.
PointClass point_by_index(const OUModel& model, int i) {
  const int s = static_cast<int>(model.s());
  const int r = static_cast<int>(model.r());
  if (i < -s || i > r) {
    throw Error(ErrorKind::BadIndex, "signed branch-point index out of range");
  }
  return classify_points(model)[static_cast<std::size_t>(i + s)];
}

/// (r+s)x(r+s) limit matrix: columns are the upper contours 1..r then the
/// window contours j = -s..-1; rows are the r down-matching then the s
/// up-matching weight families.
Eigen::MatrixXcd corollary_matrix(const OUModel& model,
                                  const MomentConstants& mc) {
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  Eigen::MatrixXcd m(r + s, r + s);
  for (int i = 1; i <= r; ++i) {
    for (int k = 1; k <= r; ++k) m(k - 1, i - 1) = mc.M1[i - 1][k - 1];
    for (int d = 1; d <= s; ++d) m(r + d - 1, i - 1) = -mc.M2[i - 1][d - 1];
  }
  for (int j = -s; j <= -1; ++j) {
    const int col = r + (j + s);
    for (int k = 1; k <= r; ++k) m(k - 1, col) = mc.N1[j + s][k - 1];
    for (int d = 1; d <= s; ++d) m(r + d - 1, col) = mc.N2[j + s][d - 1];
  }
  return m;
}

/// Same with the upper column `drop` (1..r) removed and the origin window
/// column appended last.
Eigen::MatrixXcd corollary_matrix_variant(const OUModel& model,
                                          const MomentConstants& mc,
                                          int drop) {
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  Eigen::MatrixXcd m(r + s, r + s);
  int col = 0;
  for (int i = 1; i <= r; ++i) {
    if (i == drop) continue;
    for (int k = 1; k <= r; ++k) m(k - 1, col) = mc.M1[i - 1][k - 1];
    for (int d = 1; d <= s; ++d) m(r + d - 1, col) = -mc.M2[i - 1][d - 1];
    ++col;
  }
  for (int j = -s; j <= -1; ++j) {
    for (int k = 1; k <= r; ++k) m(k - 1, col) = mc.N1[j + s][k - 1];
    for (int d = 1; d <= s; ++d) m(r + d - 1, col) = mc.N2[j + s][d - 1];
    ++col;
  }
  for (int k = 1; k <= r; ++k) m(k - 1, col) = mc.N1[s][k - 1];
  for (int d = 1; d <= s; ++d) m(r + d - 1, col) = mc.N2[s][d - 1];
  return m;
}

/// log-determinant of the level-weighted moment matrix [N3_k on window j],
/// rows k = 1..r, columns j = 0..r-1, with the per-row scale factored out so
/// huge exp(-level*z) weights never leave the representable range.
std::pair<double, double> log_det_level_matrix(const OUModel& model,
                                               const MomentConstants& mc) {
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  Eigen::MatrixXcd m(r, r);
  double scale_sum = 0.0;
  for (int k = 1; k <= r; ++k) {
    double row_scale = -1e300;
    for (int j = 0; j <= r - 1; ++j) {
      row_scale = std::max(row_scale, mc.N3[j + s][k - 1].log_scale);
    }
    scale_sum += row_scale;
    for (int j = 0; j <= r - 1; ++j) {
      const ScaledComplex& e = mc.N3[j + s][k - 1];
      m(k - 1, j) = e.value * std::exp(e.log_scale - row_scale);
    }
  }
  auto ld = log_determinant(m);
  ld.first += scale_sum;
  return ld;
}

struct PairBoundary {
  cplx f1x, f2x, f1l, f2l;
  double condition;
};

PairBoundary pair_boundary(const EigenfunctionPair& pair, double x,
                           double level) {
  PairBoundary b;
  b.f1x = eval_eigenfunction(pair.f1, x);
  b.f2x = eval_eigenfunction(pair.f2, x);
  b.f1l = eval_eigenfunction(pair.f1, level);
  b.f2l = eval_eigenfunction(pair.f2, level);
  b.condition = std::max(pair.f1.condition, pair.f2.condition);
  return b;
}

}  // namespace

double AsymptoticResult::normalizer(double t) const {
  switch (regime) {
    case Regime::XtoInf:
      return std::exp(exp_rate * t) * std::pow(t, power);
    case Regime::LtoMinusInf:
      return std::exp(exp_rate * t) * std::pow(-t, power);
    case Regime::UndershootLimit:
      return 1.0;
  }
  return 1.0;
}

RuinResult laplace_undershoot(const OUModel& model, const Query& q,
                              const QuadratureConfig& config) {
  require_query(q.x, q.level, q.zeta);
  RuinResult out;
  out.kind = RuinKind::LaplaceJump;
  out.diagnostics.quad_error = config.rel_tol;

  if (model.kappa > 0.0 && q.level > 0.0) {
    const Eigenfunction f =
        build_single_eigenfunction(model, q.level, q.zeta, config);
    const cplx v = eval_eigenfunction(f, q.x);
    out.value = v.real();
    out.imag_residual = std::abs(v.imag());
    out.continuous_part = 0.0;  // flow points away from the level
    out.diagnostics.condition = f.condition;
    return out;
  }

  if (model.kappa > 0.0 && q.level < 0.0) {
    const EigenfunctionPair pair =
        build_eigenfunction_pair(model, q.level, q.zeta, config);
    const PairBoundary b = pair_boundary(pair, q.x, q.level);
    const cplx den = b.f1l - b.f2l;
    check_denominator(den, std::abs(b.f1l) + std::abs(b.f2l),
                      "eigenfunction pair has coinciding boundary values");
    const cplx ac = (b.f1x - b.f2x) / den;
    const cplx lap = b.f1x - b.f1l * ac;
    out.value = lap.real();
    out.imag_residual = std::max(std::abs(lap.imag()), std::abs(ac.imag()));
    out.continuous_part = ac.real();
    out.diagnostics.condition = b.condition;
    return out;
  }

  if (model.kappa < 0.0 && q.level < 0.0) {
    const Eigenfunction f =
        build_recurrent_eigenfunction(model, q.level, q.zeta, config);
    const cplx v = eval_eigenfunction(f, q.x);
    out.value = v.real();
    out.imag_residual = std::abs(v.imag());
    out.continuous_part = 0.0;  // crossing from above must jump
    out.diagnostics.condition = f.condition;
    return out;
  }

  // kappa < 0, level > 0: the flow itself reaches the level.
  if (q.zeta > 0.0) {
    throw Error(ErrorKind::UnsupportedScenario,
                "zeta > 0 with inward drift above a positive level needs a "
                "second eigenfunction family that is not available");
  }
  auto split = recurrent_split(model, q.x, q.level, config);
  out.value = split.second.value;
  out.imag_residual = split.second.imag_residual;
  out.continuous_part = split.first.value;
  out.diagnostics = split.second.diagnostics;
  return out;
}

RuinResult ruin_probability(const OUModel& model, double x, double level,
                            const QuadratureConfig& config) {
  if (!(x > level)) {
    throw Error(ErrorKind::BadScenario,
                "start point must lie strictly above the level");
  }
  RuinResult out;
  out.kind = RuinKind::RuinProb;
  out.diagnostics.quad_error = config.rel_tol;

  if (model.kappa < 0.0) {
    out.value = 1.0;  // inward drift makes every level recurrent
    if (level <= 0.0) out.continuous_part = 0.0;
    return out;
  }
  if (level == 0.0) {
    throw Error(ErrorKind::BadScenario,
                "level must be nonzero (branch point sits at the level)");
  }

  if (level > 0.0) {
    const Eigenfunction f = build_single_eigenfunction(model, level, 0.0, config);
    const cplx v = eval_eigenfunction(f, x);
    out.value = v.real();
    out.imag_residual = std::abs(v.imag());
    out.continuous_part = 0.0;
    out.diagnostics.condition = f.condition;
    return out;
  }

  const EigenfunctionPair pair = build_eigenfunction_pair(model, level, 0.0, config);
  const PairBoundary b = pair_boundary(pair, x, level);
  const cplx den = b.f1l - b.f2l;
  check_denominator(den, std::abs(b.f1l) + std::abs(b.f2l),
                    "eigenfunction pair has coinciding boundary values");
  const cplx p =
      (b.f1x * (1.0 - b.f2l) + b.f2x * (b.f1l - 1.0)) / den;
  const cplx ac = (b.f1x - b.f2x) / den;
  out.value = p.real();
  out.imag_residual = std::max(std::abs(p.imag()), std::abs(ac.imag()));
  out.continuous_part = ac.real();
  out.diagnostics.condition = b.condition;
  return out;
}

std::pair<RuinResult, RuinResult> recurrent_split(
    const OUModel& model, double x, double level,
    const QuadratureConfig& config) {
  if (!(model.kappa < 0.0)) {
    throw Error(ErrorKind::BadScenario, "crossing-type split needs kappa < 0");
  }
  if (!(x > level)) {
    throw Error(ErrorKind::BadScenario,
                "start point must lie strictly above the level");
  }
  RuinResult cont, jump;
  cont.kind = RuinKind::SplitCont;
  jump.kind = RuinKind::SplitJump;
  cont.diagnostics.quad_error = config.rel_tol;
  jump.diagnostics.quad_error = config.rel_tol;

  if (level <= 0.0) {
    cont.value = 0.0;  // flow points away from the level, only jumps cross
    jump.value = 1.0;
    return {cont, jump};
  }

  const Eigenfunction f = build_single_eigenfunction(model, level, 0.0, config);
  const cplx fx = eval_eigenfunction(f, x);
  const cplx fl = eval_eigenfunction(f, level);
  const cplx den = fl - 1.0;
  check_denominator(den, 1.0 + std::abs(fl),
                    "eigenfunction boundary value equals the certain-ruin "
                    "constant; split denominator vanishes");
  const cplx ac = (fx - 1.0) / den;
  cont.value = ac.real();
  cont.imag_residual = std::abs(ac.imag());
  cont.diagnostics.condition = f.condition;
  jump.value = 1.0 - cont.value;
  jump.imag_residual = cont.imag_residual;
  jump.diagnostics.condition = f.condition;
  return {cont, jump};
}

namespace {

/// Shared tail data for the x -> infinity constant: the branch exponent at
/// mu_1, the excluded-factor kernel value, and the wrapped-wedge reference
/// integral int z^{e1} exp(-z) dz.
struct TailPieces {
  double e1;
  cplx psi_ex;
  cplx loop;
};

TailPieces x_tail_pieces(const OUModel& model, double a,
                         const QuadratureConfig& config) {
  if (!(model.kappa > 0.0)) {
    throw Error(ErrorKind::BadScenario,
                "x -> infinity tail constant needs kappa > 0");
  }
  TailPieces t;
  const int s = static_cast<int>(model.s());
  t.e1 = classify_points(model)[static_cast<std::size_t>(s + 1)].exponent;
  t.psi_ex = psi_excluding_at(model, model.mu(1));
  t.loop = integrate_reference(ReferenceContour{ReferenceKind::GammaMinusA, a},
                               t.e1, -1, config)
               .unscaled();
  return t;
}

AsymptoticResult finish_K(const TailPieces& t, const OUModel& model,
                          const cplx& boundary_factor) {
  AsymptoticResult out;
  out.regime = Regime::XtoInf;
  out.exp_rate = -model.mu(1);
  out.power = -t.e1 - 1.0;
  out.constant = t.psi_ex * t.loop * boundary_factor;
  out.ingredients = {{"psi_excluding_mu1", t.psi_ex},
                     {"wrapped_wedge_integral", t.loop},
                     {"boundary_factor", boundary_factor}};
  return out;
}

}  // namespace

AsymptoticResult asymptotic_K(const OUModel& model, double level,
                              const EigenfunctionPair& pair, double a,
                              const QuadratureConfig& config) {
  if (!(level < 0.0)) {
    throw Error(ErrorKind::BadScenario,
                "paired tail constant needs a negative level");
  }
  const TailPieces t = x_tail_pieces(model, a, config);
  const cplx c11 = pair.f1.upper_terms.at(0).first;
  const cplx c12 = pair.f2.upper_terms.at(0).first;
  const cplx f1l = eval_eigenfunction(pair.f1, level);
  const cplx f2l = eval_eigenfunction(pair.f2, level);
  const cplx den = f1l - f2l;
  check_denominator(den, std::abs(f1l) + std::abs(f2l),
                    "eigenfunction pair has coinciding boundary values");
  const cplx factor = (c11 * (1.0 - f2l) + c12 * (f1l - 1.0)) / den;
  return finish_K(t, model, factor);
}

AsymptoticResult asymptotic_K(const OUModel& model, double level,
                              const Eigenfunction& single, double a,
                              const QuadratureConfig& config) {
  if (!(level > 0.0)) {
    throw Error(ErrorKind::BadScenario,
                "single-path tail constant needs a positive level");
  }
  if (single.whole_terms.empty()) {
    throw Error(ErrorKind::BadScenario,
                "tail constant needs a whole-line eigenfunction");
  }
  const TailPieces t = x_tail_pieces(model, a, config);
  return finish_K(t, model, single.whole_terms.at(0).first);
}

AsymptoticResult asymptotic_K(const OUModel& model, double level, double a,
                              const QuadratureConfig& config) {
  if (!(model.kappa > 0.0)) {
    throw Error(ErrorKind::BadScenario,
                "x -> infinity tail constant needs kappa > 0");
  }
  if (level == 0.0) {
    throw Error(ErrorKind::BadScenario, "level must be nonzero");
  }
  if (level > 0.0) {
    const Eigenfunction f = build_single_eigenfunction(model, level, 0.0, config);
    return asymptotic_K(model, level, f, a, config);
  }
  const EigenfunctionPair pair = build_eigenfunction_pair(model, level, 0.0, config);
  return asymptotic_K(model, level, pair, a, config);
}

AsymptoticResult asymptotic_N3(const OUModel& model, int i, int k, double a,
                               const QuadratureConfig& config) {
  if (!(model.kappa > 0.0)) {
    throw Error(ErrorKind::BadScenario,
                "level -> -infinity constants need kappa > 0");
  }
  const int r = static_cast<int>(model.r());
  if (k < 1 || k > r) {
    throw Error(ErrorKind::BadIndex, "weight index k out of range 1..r");
  }
  const PointClass pt = point_by_index(model, i);
  const cplx psi_ex = psi_excluding_at(model, pt.location);
  const ReferenceKind ref_kind = pt.kind == PointKind::Zero
                                     ? ReferenceKind::GammaTildeRay
                                     : ReferenceKind::GammaTildeA;

  AsymptoticResult out;
  out.regime = Regime::LtoMinusInf;
  out.exp_rate = -pt.location;
  if (i >= 1 && i == k) {
    const cplx loop =
        integrate_reference(ReferenceContour{ref_kind, a}, pt.exponent - 1.0,
                            +1, config)
            .unscaled();
    out.power = -pt.exponent;
    out.constant = psi_ex * loop;
    out.ingredients = {{"psi_excluding_point", psi_ex},
                       {"scaling_loop_integral", loop}};
  } else {
    const cplx loop =
        integrate_reference(ReferenceContour{ref_kind, a}, pt.exponent, +1,
                            config)
            .unscaled();
    const cplx pole_gap = pt.location - model.mu(k);
    out.power = -pt.exponent - 1.0;
    out.constant = psi_ex * loop / pole_gap;
    out.ingredients = {{"psi_excluding_point", psi_ex},
                       {"scaling_loop_integral", loop},
                       {"pole_gap", pole_gap}};
  }
  return out;
}

AsymptoticResult limit_ruin_level(const OUModel& model, double x, double a,
                                  const QuadratureConfig& config) {
  if (!(model.kappa > 0.0)) {
    throw Error(ErrorKind::BadScenario,
                "level -> -infinity ruin limit needs kappa > 0");
  }
  if (!(x > 0.0)) {
    throw Error(ErrorKind::BadScenario,
                "ruin limit evaluation point must be positive");
  }
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  const ContourSet cs = default_contours(model);
  // Only the level-free constants enter; any level works for the moment set.
  const MomentConstants mc =
      compute_moments(model, cs, -1.0, MomentSet::All, config);

  const Eigen::MatrixXcd big = corollary_matrix(model, mc);
  const cplx det_big = Eigen::PartialPivLU<Eigen::MatrixXcd>(big).determinant();
  if (!(std::abs(det_big) > 0.0) || !std::isfinite(std::abs(det_big))) {
    throw Error(ErrorKind::SingularSystem,
                "limit coefficient matrix is singular");
  }
  const cplx psi0 = psi_excluding_at(model, 0.0);
  const cplx hankel =
      integrate_reference(ReferenceContour{ReferenceKind::GammaTildeA, a},
                          -1.0, +1, config)
          .unscaled();

  AsymptoticResult out;
  out.regime = Regime::LtoMinusInf;
  out.exp_rate = 0.0;
  out.power = 0.0;
  out.ingredients.emplace_back("psi_excluding_origin", psi0);
  out.ingredients.emplace_back("origin_loop_integral", hankel);

  cplx value{0.0, 0.0};
  for (int i = 1; i <= r; ++i) {
    const Eigen::MatrixXcd vi = corollary_matrix_variant(model, mc, i);
    const cplx det_i = Eigen::PartialPivLU<Eigen::MatrixXcd>(vi).determinant();
    const double sign = ((r + s - i) % 2 == 0) ? 1.0 : -1.0;
    const cplx ci = sign * det_i / det_big / (psi0 * hankel);
    out.ingredients.emplace_back("c_" + std::to_string(i), ci);
    value -= ci * eval_contour_term(model, cs.upper[i - 1], x, config);
  }
  out.constant = value;
  return out;
}

LevelDiagnostics level_asymptote_diagnostics(const OUModel& model, double level,
                                             const QuadratureConfig& config) {
  if (!(model.kappa > 0.0) || !(level < 0.0)) {
    throw Error(ErrorKind::BadScenario,
                "level diagnostics need kappa > 0 and a negative level");
  }
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  const ContourSet cs = default_contours(model);
  const MomentConstants mc =
      compute_moments(model, cs, level, MomentSet::All, config);
  const LinearSystem sys_a = assemble_A(model, level, 0.0, mc);
  const SolveResult sol = solve(sys_a);

  LevelDiagnostics out;
  const cplx b0 = sol.coefficients(r + s);
  const cplx f2_origin = eval_contour_term(model, cs.level_paths[s], level, config);
  out.b0_times_f2 = -b0 * f2_origin;

  // det(full system) factors asymptotically into det(level block) times
  // det(level-free complement); the sign is the parity of moving the r
  // growing level-weighted columns (the last r) past the level-free block
  // in the generalized expansion along the top r rows: (-1)^{r(r+s)}.
  const auto ld_a = log_determinant(sys_a.matrix);
  const auto ld_n = log_det_level_matrix(model, mc);
  const auto ld_m = log_determinant(corollary_matrix(model, mc));
  const double mag = std::exp(ld_a.first - ld_n.first - ld_m.first);
  const double phase =
      ld_a.second - ld_n.second - ld_m.second + kPi * ((r * (r + s)) % 2);
  out.det_ratio = mag * cplx{std::cos(phase), std::sin(phase)};
  return out;
}

AsymptoticResult undershoot_limit(const OUModel& model, double zeta) {
  if (!(model.kappa < 0.0)) {
    throw Error(ErrorKind::BadScenario,
                "deep-level undershoot limit needs kappa < 0");
  }
  if (zeta < 0.0) {
    throw Error(ErrorKind::BadConfig, "transform argument must be >= 0");
  }
  AsymptoticResult out;
  out.regime = Regime::UndershootLimit;
  out.exp_rate = 0.0;
  out.power = 0.0;
  out.constant = model.mu(1) / (model.mu(1) + zeta);
  out.ingredients = {{"mu_1", model.mu(1)}, {"zeta", zeta}};
  return out;
}

}  // namespace oujump

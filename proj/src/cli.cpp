#include "oujump/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "oujump/config.hpp"
#include "oujump/contour.hpp"
#include "oujump/eigensystem.hpp"
#include "oujump/errors.hpp"
#include "oujump/kernel.hpp"
#include "oujump/model.hpp"
#include "oujump/quadrature.hpp"
#include "oujump/ruin.hpp"
#include "oujump/simulate.hpp"

namespace oujump {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

constexpr double kProbSlack = 1e-8;

/// Accumulates one run's output: named results and diagnostics, invariant
/// flags (never clamped values), and an optional table.
struct Document {
  std::vector<std::pair<std::string, std::string>> results;
  std::vector<std::pair<std::string, std::string>> diagnostics;
  std::vector<std::string> flags;
  std::vector<std::string> table_header;
  std::vector<std::vector<std::string>> table_rows;

  void result(const std::string& key, double v) {
    results.emplace_back(key, fmt(v));
  }
  void result_text(const std::string& key, const std::string& v) {
    results.emplace_back(key, v);
  }
  void diag(const std::string& key, double v) {
    diagnostics.emplace_back(key, fmt(v));
  }
  void diag_text(const std::string& key, const std::string& v) {
    diagnostics.emplace_back(key, v);
  }
  void flag(const std::string& text) { flags.push_back(text); }
};

void emit_table(std::ostream& os, const Document& doc) {
  for (std::size_t c = 0; c < doc.table_header.size(); ++c) {
    if (c) os << ",";
    os << doc.table_header[c];
  }
  os << "\n";
  for (const auto& row : doc.table_rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ",";
      os << row[c];
    }
    os << "\n";
  }
}

void emit_document(std::ostream& os, const RunSpec& rs, const Document& doc) {
  if (rs.format == "table") {
    if (!doc.table_header.empty()) {
      emit_table(os, doc);
    } else {
      for (std::size_t i = 0; i < doc.results.size(); ++i) {
        if (i) os << ",";
        os << doc.results[i].first;
      }
      os << "\n";
      for (std::size_t i = 0; i < doc.results.size(); ++i) {
        if (i) os << ",";
        os << doc.results[i].second;
      }
      os << "\n";
    }
    return;
  }
  os << "[config]\n" << emit_runspec(rs) << "[/config]\n";
  os << "[results]\n";
  for (const auto& [k, v] : doc.results) os << k << " = " << v << "\n";
  os << "[/results]\n";
  if (!doc.table_header.empty()) {
    os << "[table]\n";
    emit_table(os, doc);
    os << "[/table]\n";
  }
  os << "[diagnostics]\n";
  for (const auto& [k, v] : doc.diagnostics) os << k << " = " << v << "\n";
  os << "[/diagnostics]\n";
  if (!doc.flags.empty()) {
    os << "[flags]\n";
    for (const auto& f : doc.flags) os << f << "\n";
    os << "[/flags]\n";
  }
}

/// Emits one headline value with its diagnostics; probability-range and
/// imaginary-residual violations are flagged, never clamped.
void attach_result(Document& doc, const std::string& name, const RuinResult& r,
                   bool is_probability) {
  doc.result(name, r.value);
  if (r.continuous_part) {
    doc.result(name + "_continuous_part", *r.continuous_part);
  }
  doc.diag(name + "_imag_residual", r.imag_residual);
  doc.diag(name + "_condition", r.diagnostics.condition);
  doc.diag(name + "_quad_budget", r.diagnostics.quad_error);
  if (is_probability && (r.value < -kProbSlack || r.value > 1.0 + kProbSlack)) {
    doc.flag(name + " outside [0,1]: " + fmt(r.value));
  }
  if (r.continuous_part &&
      (*r.continuous_part < -kProbSlack ||
       *r.continuous_part > 1.0 + kProbSlack)) {
    doc.flag(name + "_continuous_part outside [0,1]: " +
             fmt(*r.continuous_part));
  }
  if (r.imag_residual > kProbSlack) {
    doc.flag(name + " imaginary residual above budget: " +
             fmt(r.imag_residual));
  }
}

std::string kind_text(PointKind k) {
  return k == PointKind::Zero ? "zero" : "singularity";
}

void cmd_validate(const RunSpec& rs, Document& doc) {
  const OUModel model = make_model(rs);
  doc.result("r", static_cast<double>(model.r()));
  doc.result("s", static_cast<double>(model.s()));
  doc.result("q", model.jumps.q());
  doc.result("jump_mean", jump_mean(model));
  doc.result("decay_exponent", psi_decay_exponent(model));
  const auto pts = classify_points(model);
  const int s = static_cast<int>(model.s());
  for (std::size_t idx = 0; idx < pts.size(); ++idx) {
    const int j = static_cast<int>(idx) - s;
    const std::string base = "point_" + std::to_string(j);
    doc.result(base + "_location", pts[idx].location);
    doc.result(base + "_exponent", pts[idx].exponent);
    doc.result_text(base + "_kind", kind_text(pts[idx].kind));
  }
  if (rs.level != 0.0) {
    const Scenario sc = make_scenario(model.kappa, rs.level);
    doc.result_text("continuous_crossing_possible",
                    sc.continuity_possible ? "true" : "false");
  }
}

void cmd_kernel(const RunSpec& rs, Document& doc) {
  const OUModel model = make_model(rs);
  const cplx z{rs.z_re, rs.z_im};
  const cplx v = psi_principal(model, z);
  doc.result("psi_re", v.real());
  doc.result("psi_im", v.imag());
  doc.result("decay_exponent", psi_decay_exponent(model));
}

void cmd_ruin(const RunSpec& rs, Document& doc) {
  const OUModel model = make_model(rs);
  const RuinResult r =
      ruin_probability(model, rs.x, rs.level, make_quadrature(rs));
  attach_result(doc, "ruin_probability", r, true);
}

void cmd_laplace(const RunSpec& rs, Document& doc) {
  const OUModel model = make_model(rs);
  const QuadratureConfig quad = make_quadrature(rs);
  if (rs.zeta_grid.empty()) {
    const RuinResult r =
        laplace_undershoot(model, Query{rs.x, rs.level, rs.zeta}, quad);
    attach_result(doc, "laplace_jump", r, true);
    return;
  }
  std::vector<std::pair<double, double>> curve;
  for (double z : rs.zeta_grid) {
    const RuinResult r =
        laplace_undershoot(model, Query{rs.x, rs.level, z}, quad);
    attach_result(doc, "laplace_jump_zeta_" + fmt(z), r, true);
    curve.emplace_back(z, r.value);
  }
  std::sort(curve.begin(), curve.end());
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    if (curve[i + 1].second > curve[i].second + 1e-10) {
      doc.flag("laplace transform not monotone: value rises from zeta=" +
               fmt(curve[i].first) + " to zeta=" + fmt(curve[i + 1].first));
    }
  }
}

void cmd_split(const RunSpec& rs, Document& doc) {
  const OUModel model = make_model(rs);
  const auto [cont, jump] =
      recurrent_split(model, rs.x, rs.level, make_quadrature(rs));
  attach_result(doc, "split_continuous", cont, true);
  attach_result(doc, "split_jump", jump, true);
  if (std::abs(cont.value + jump.value - 1.0) > kProbSlack) {
    doc.flag("split parts do not sum to 1: " +
             fmt(cont.value + jump.value));
  }
}

void attach_ingredients(Document& doc, const AsymptoticResult& a) {
  for (const auto& [name, v] : a.ingredients) {
    doc.diag("ingredient_" + name + "_re", v.real());
    doc.diag("ingredient_" + name + "_im", v.imag());
  }
}

void cmd_asympt_x(const RunSpec& rs, Document& doc) {
  const OUModel model = make_model(rs);
  const AsymptoticResult k =
      asymptotic_K(model, rs.level, 1.0, make_quadrature(rs));
  doc.result("k_constant", k.constant.real());
  doc.result("exp_rate", k.exp_rate);
  doc.result("power", k.power);
  if (rs.x > 0.0) {
    doc.result("tail_approx_at_x", k.constant.real() * k.normalizer(rs.x));
  }
  doc.diag("k_imag_residual", std::abs(k.constant.imag()));
  attach_ingredients(doc, k);
  if (std::abs(k.constant.imag()) >
      kProbSlack * std::max(1.0, std::abs(k.constant.real()))) {
    doc.flag("tail constant imaginary residual above budget: " +
             fmt(k.constant.imag()));
  }
}

void cmd_asympt_level(const RunSpec& rs, Document& doc) {
  const OUModel model = make_model(rs);
  const QuadratureConfig quad = make_quadrature(rs);
  const AsymptoticResult lim = limit_ruin_level(model, rs.x, 1.0, quad);
  doc.result("limit_value", lim.constant.real());
  doc.diag("limit_imag_residual", std::abs(lim.constant.imag()));
  attach_ingredients(doc, lim);
  if (lim.constant.real() < -kProbSlack ||
      lim.constant.real() > 1.0 + kProbSlack) {
    doc.flag("limit_value outside [0,1]: " + fmt(lim.constant.real()));
  }
  if (rs.level < 0.0) {
    const LevelDiagnostics d =
        level_asymptote_diagnostics(model, rs.level, quad);
    doc.diag("b0_times_f2_re", d.b0_times_f2.real());
    doc.diag("b0_times_f2_im", d.b0_times_f2.imag());
    doc.diag("det_ratio_re", d.det_ratio.real());
    doc.diag("det_ratio_im", d.det_ratio.imag());
  }
}

void cmd_undershoot_limit(const RunSpec& rs, Document& doc) {
  const OUModel model = make_model(rs);
  const AsymptoticResult u = undershoot_limit(model, rs.zeta);
  doc.result("undershoot_limit", u.constant.real());
  attach_ingredients(doc, u);
}

void cmd_simulate(const RunSpec& rs, Document& doc) {
  const OUModel model = make_model(rs);
  const PathConfig pc = make_paths(rs);
  const Estimate ruin = estimate_ruin(model, rs.x, rs.level, pc);
  const LaplaceSplit lap =
      estimate_laplace(model, rs.x, rs.level, rs.zeta, pc);
  doc.result("ruin_mean", ruin.mean);
  doc.result("ruin_stderr", ruin.std_err);
  doc.result("laplace_jump_mean", lap.jump.mean);
  doc.result("laplace_jump_stderr", lap.jump.std_err);
  doc.result("continuous_fraction", lap.cont.mean);
  doc.result("continuous_fraction_stderr", lap.cont.std_err);
  doc.diag("paths", static_cast<double>(ruin.n));
  doc.diag("ruin_bias_bound", ruin.bias_bound);
  doc.diag_text("ruin_truncation_note", ruin.truncation_note);
  doc.diag("laplace_bias_bound", lap.jump.bias_bound);
  doc.diag_text("laplace_truncation_note", lap.jump.truncation_note);
}

/// Eigenfunctions whose annihilation the verify subcommand checks, chosen
/// by the scenario dispatch of the Laplace query.
std::vector<Eigenfunction> scenario_eigenfunctions(const OUModel& model,
                                                   double level, double zeta,
                                                   const QuadratureConfig& q) {
  if (level == 0.0) {
    throw Error(ErrorKind::BadScenario, "level must be nonzero");
  }
  if (model.kappa > 0.0 && level < 0.0) {
    const EigenfunctionPair pair =
        build_eigenfunction_pair(model, level, zeta, q);
    return {pair.f1, pair.f2};
  }
  if (model.kappa < 0.0 && level > 0.0 && zeta > 0.0) {
    throw Error(ErrorKind::UnsupportedScenario,
                "zeta > 0 with inward drift above a positive level needs a "
                "second eigenfunction family that is not available");
  }
  return {build_single_eigenfunction(model, level, zeta, q)};
}

void cmd_verify_generator(const RunSpec& rs, Document& doc) {
  const OUModel model = make_model(rs);
  const QuadratureConfig quad = make_quadrature(rs);
  const int n = std::max(2, rs.grid);
  const auto fs = scenario_eigenfunctions(model, rs.level, rs.zeta, quad);
  GeneratorConfig gen;

  int used = 0, skipped = 0;
  double worst = 0.0, worst_y = rs.level, scale = 0.0;
  for (std::size_t m = 0; m < fs.size(); ++m) {
    double f_worst = 0.0, f_worst_y = rs.level;
    for (int i = 0; i < n; ++i) {
      const double y = rs.level + 20.0 * (i + 0.5) / n;
      const double h = gen.h_scale * std::max(1.0, std::abs(y));
      const double margin = 1.01 * gen.kink_margin * h;
      if (std::abs(y - rs.level) < margin || std::abs(y) < margin) {
        ++skipped;
        continue;
      }
      const GeneratorApplication a =
          apply_generator_scaled(model, fs[m], y, gen);
      ++used;
      scale = std::max(scale, a.scale);
      if (std::abs(a.value) > f_worst) {
        f_worst = std::abs(a.value);
        f_worst_y = y;
      }
    }
    doc.result("max_abs_residual_f" + std::to_string(m + 1), f_worst);
    if (f_worst > worst) {
      worst = f_worst;
      worst_y = f_worst_y;
    }
  }
  const double rel = worst / std::max(scale, 1e-300);
  doc.result("relative_residual", rel);
  doc.result("generator_scale", scale);
  doc.result("worst_y", worst_y);
  doc.diag("grid_points_used", used);
  doc.diag("grid_points_skipped", skipped);
  if (rel > 1e-6) {
    doc.flag("annihilation residual above 1e-6: " + fmt(rel));
  }
}

/// One sweep row; column layout is fixed per inner command.
std::vector<std::string> sweep_columns(const std::string& inner) {
  if (inner == "ruin" || inner == "laplace") {
    return {"value", "continuous_part", "imag_residual", "condition"};
  }
  if (inner == "split") {
    return {"continuous", "jump", "imag_residual", "condition"};
  }
  if (inner == "asympt-x") {
    return {"k_constant", "tail_approx", "exp_rate", "power"};
  }
  if (inner == "asympt-level") return {"value", "imag_residual"};
  if (inner == "undershoot-limit") return {"value"};
  throw Error(ErrorKind::BadConfig,
              "sweep inner command must be one of ruin, laplace, split, "
              "asympt-x, asympt-level, undershoot-limit");
}

std::vector<double> sweep_values(const RunSpec& rs, const std::string& inner,
                                 const RunSpec& point) {
  const OUModel model = make_model(point);
  const QuadratureConfig quad = make_quadrature(point);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (inner == "ruin") {
    const RuinResult r = ruin_probability(model, point.x, point.level, quad);
    return {r.value, r.continuous_part ? *r.continuous_part : nan,
            r.imag_residual, r.diagnostics.condition};
  }
  if (inner == "laplace") {
    const RuinResult r = laplace_undershoot(
        model, Query{point.x, point.level, point.zeta}, quad);
    return {r.value, r.continuous_part ? *r.continuous_part : nan,
            r.imag_residual, r.diagnostics.condition};
  }
  if (inner == "split") {
    const auto [cont, jump] =
        recurrent_split(model, point.x, point.level, quad);
    return {cont.value, jump.value,
            std::max(cont.imag_residual, jump.imag_residual),
            cont.diagnostics.condition};
  }
  if (inner == "asympt-x") {
    const AsymptoticResult k = asymptotic_K(model, point.level, 1.0, quad);
    const double approx = rs.sweep_var == "x" && point.x > 0.0
                              ? k.constant.real() * k.normalizer(point.x)
                              : nan;
    return {k.constant.real(), approx, k.exp_rate, k.power};
  }
  if (inner == "asympt-level") {
    const AsymptoticResult lim = limit_ruin_level(model, point.x, 1.0, quad);
    return {lim.constant.real(), std::abs(lim.constant.imag())};
  }
  const AsymptoticResult u = undershoot_limit(model, point.zeta);
  return {u.constant.real()};
}

void cmd_sweep(const RunSpec& rs, const std::string& inner, Document& doc) {
  if (rs.sweep_var != "x" && rs.sweep_var != "level" && rs.sweep_var != "zeta") {
    throw Error(ErrorKind::BadConfig, "sweep var must be x, level, or zeta");
  }
  if (rs.sweep_points < 2) {
    throw Error(ErrorKind::BadConfig, "sweep needs at least 2 points");
  }
  const std::vector<std::string> cols = sweep_columns(inner);
  doc.table_header.push_back(rs.sweep_var);
  doc.table_header.insert(doc.table_header.end(), cols.begin(), cols.end());
  doc.table_header.push_back("status");

  for (int i = 0; i < rs.sweep_points; ++i) {
    const double v = rs.sweep_from + (rs.sweep_to - rs.sweep_from) * i /
                                         (rs.sweep_points - 1);
    RunSpec point = rs;
    if (rs.sweep_var == "x") point.x = v;
    if (rs.sweep_var == "level") point.level = v;
    if (rs.sweep_var == "zeta") point.zeta = v;
    std::vector<std::string> row{fmt(v)};
    try {
      for (double c : sweep_values(rs, inner, point)) row.push_back(fmt(c));
      row.push_back("ok");
    } catch (const Error& e) {
      while (row.size() < cols.size() + 1) row.push_back("nan");
      row.push_back(Error::kind_name(e.kind()));
    }
    doc.table_rows.push_back(row);
  }
}

struct CliValues {
  std::string config_path;
  double kappa = 0, lambda = 0, p = 0;
  std::string alphas, mus, betas, nus;
  double x = 0, level = 0, zeta = 0;
  std::string zeta_grid;
  double tol = 0;
  std::uint64_t seed = 0;
  std::int64_t paths = 0;
  double horizon = 0, barrier = 0;
  double z_re = 0, z_im = 0;
  int grid = 0;
  std::string var;
  double from = 0, to = 0;
  int points = 0;
  std::string format, out_path, inner;
};

int dispatch(const std::string& name, const RunSpec& rs,
             const std::string& inner, std::ostream& os, std::ostream& es) {
  Document doc;
  try {
    if (name == "validate") cmd_validate(rs, doc);
    else if (name == "kernel") cmd_kernel(rs, doc);
    else if (name == "ruin") cmd_ruin(rs, doc);
    else if (name == "laplace") cmd_laplace(rs, doc);
    else if (name == "split") cmd_split(rs, doc);
    else if (name == "asympt-x") cmd_asympt_x(rs, doc);
    else if (name == "asympt-level") cmd_asympt_level(rs, doc);
    else if (name == "undershoot-limit") cmd_undershoot_limit(rs, doc);
    else if (name == "simulate") cmd_simulate(rs, doc);
    else if (name == "verify-generator") cmd_verify_generator(rs, doc);
    else if (name == "sweep") cmd_sweep(rs, inner, doc);
  } catch (const Error& e) {
    es << "error [" << Error::kind_name(e.kind()) << "]: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    es << "error [numerical]: " << e.what() << "\n";
    return 3;
  }
  std::ostringstream text;
  emit_document(text, rs, doc);
  if (!rs.out.empty()) {
    std::ofstream file(rs.out);
    if (!file) {
      es << "error [BadConfig]: cannot write output file '" << rs.out << "'\n";
      return 2;
    }
    file << text.str();
  }
  os << text.str();
  return 0;
}

int run_impl(const std::vector<std::string>& args, std::ostream& os,
             std::ostream& es) {
  CLI::App app{"first-passage toolkit for jump Ornstein-Uhlenbeck models"};
  app.require_subcommand(1);
  CliValues v;

  auto* o_config = app.add_option("--config", v.config_path,
                                  "flat key-value run description file");
  auto* o_kappa = app.add_option("--kappa", v.kappa, "drift rate");
  auto* o_lambda = app.add_option("--lambda", v.lambda, "jump intensity");
  auto* o_p = app.add_option("--p", v.p, "downward jump probability");
  auto* o_alphas = app.add_option("--alphas", v.alphas, "downward weights");
  auto* o_mus = app.add_option("--mus", v.mus, "downward rates");
  auto* o_betas = app.add_option("--betas", v.betas, "upward weights");
  auto* o_nus = app.add_option("--nus", v.nus, "upward rates");
  auto* o_x = app.add_option("--x", v.x, "start point");
  auto* o_level = app.add_option("--level", v.level, "passage level");
  auto* o_zeta = app.add_option("--zeta", v.zeta, "Laplace argument");
  auto* o_zgrid = app.add_option("--zeta-grid", v.zeta_grid,
                                 "list of Laplace arguments");
  auto* o_tol = app.add_option("--tol", v.tol, "quadrature tolerance");
  auto* o_seed = app.add_option("--seed", v.seed, "RNG seed");
  auto* o_paths = app.add_option("--paths", v.paths, "Monte Carlo paths");
  auto* o_horizon = app.add_option("--horizon", v.horizon, "time horizon");
  auto* o_barrier =
      app.add_option("--barrier", v.barrier, "survival barrier (0 = auto)");
  auto* o_zre = app.add_option("--z-re", v.z_re, "kernel point, real part");
  auto* o_zim = app.add_option("--z-im", v.z_im, "kernel point, imag part");
  auto* o_grid = app.add_option("--grid", v.grid, "generator grid points");
  auto* o_format = app.add_option("--format", v.format,
                                  "output format: table or document");
  auto* o_out = app.add_option("--out", v.out_path, "also write output here");

  const std::vector<std::string> names{
      "validate",         "kernel",   "ruin",
      "laplace",          "split",    "asympt-x",
      "asympt-level",     "undershoot-limit", "simulate",
      "verify-generator", "sweep"};
  for (const std::string& n : names) {
    CLI::App* sub = app.add_subcommand(n);
    sub->fallthrough();
    if (n == "sweep") {
      sub->add_option("--var", v.var, "sweep variable: x, level, or zeta");
      sub->add_option("--from", v.from, "first grid value");
      sub->add_option("--to", v.to, "last grid value");
      sub->add_option("--points", v.points, "grid size");
      sub->add_option("inner", v.inner, "inner command to evaluate per point");
    }
  }

  // CLI11 wants argv order reversed and the program name absent.
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, os, es);
    return code == 0 ? 0 : 2;
  }

  RunSpec rs;
  try {
    if (o_config->count()) {
      std::ifstream file(v.config_path);
      if (!file) {
        throw Error(ErrorKind::BadConfig,
                    "cannot read config file '" + v.config_path + "'");
      }
      std::ostringstream text;
      text << file.rdbuf();
      rs = parse_runspec(text.str());
    }
    if (o_kappa->count()) rs.kappa = v.kappa;
    if (o_lambda->count()) rs.lambda = v.lambda;
    if (o_p->count()) rs.p = v.p;
    if (o_alphas->count()) rs.alphas = parse_number_list(v.alphas);
    if (o_mus->count()) rs.mus = parse_number_list(v.mus);
    if (o_betas->count()) rs.betas = parse_number_list(v.betas);
    if (o_nus->count()) rs.nus = parse_number_list(v.nus);
    if (o_x->count()) rs.x = v.x;
    if (o_level->count()) rs.level = v.level;
    if (o_zeta->count()) rs.zeta = v.zeta;
    if (o_zgrid->count()) rs.zeta_grid = parse_number_list(v.zeta_grid);
    if (o_tol->count()) rs.tol = v.tol;
    if (o_seed->count()) rs.seed = v.seed;
    if (o_paths->count()) rs.paths = v.paths;
    if (o_horizon->count()) rs.horizon = v.horizon;
    if (o_barrier->count()) rs.upper_barrier = v.barrier;
    if (o_zre->count()) rs.z_re = v.z_re;
    if (o_zim->count()) rs.z_im = v.z_im;
    if (o_grid->count()) rs.grid = v.grid;
    if (o_format->count()) rs.format = v.format;
    if (o_out->count()) rs.out = v.out_path;
    if (rs.format != "document" && rs.format != "table") {
      throw Error(ErrorKind::BadConfig,
                  "format must be 'document' or 'table'");
    }

    CLI::App* sub = app.get_subcommands().at(0);
    rs.command = sub->get_name();
    if (rs.command == "sweep") {
      if (sub->count("--var")) rs.sweep_var = v.var;
      if (sub->count("--from")) rs.sweep_from = v.from;
      if (sub->count("--to")) rs.sweep_to = v.to;
      if (sub->count("--points")) rs.sweep_points = v.points;
      if (sub->count("inner") == 0) {
        throw Error(ErrorKind::BadConfig,
                    "sweep needs an inner command to evaluate");
      }
    }
    return dispatch(rs.command, rs, v.inner, os, es);
  } catch (const Error& e) {
    es << "error [" << Error::kind_name(e.kind()) << "]: " << e.what() << "\n";
    return e.exit_code();
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_impl(args, std::cout, std::cerr);
}

int run_cli(const std::vector<std::string>& args, std::string& captured) {
  std::ostringstream os;
  const int code = run_impl(args, os, os);
  captured = os.str();
  return code;
}

}  // namespace oujump

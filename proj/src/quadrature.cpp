#include "oujump/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <utility>

#include "oujump/errors.hpp"

namespace oujump {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// 15-point Kronrod extension of 7-point Gauss on [-1, 1] (nonnegative
// abscissae; standard published values).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// Gauss weights attached to kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

double exponent_near(const BranchedFactors& f, const cplx& z0,
                     const std::optional<double>& pole, bool tol_scale_pole) {
  (void)tol_scale_pole;
  const double tol = 1e-10 * f.scale();
  double sum = 0.0;
  for (std::size_t j = 0; j < f.points.size(); ++j) {
    if (std::abs(z0 - cplx(f.points[j], 0.0)) <= tol) sum += f.exponents[j];
  }
  if (pole && std::abs(z0 - cplx(*pole, 0.0)) <= tol) sum -= 1.0;
  return sum;
}

// Grading power for an endpoint where the integrand behaves like x^sigma.
// Returns 1 when no grading is needed.  Throws when the endpoint is not
// integrable.
double grading_power(double sigma, const std::string& where) {
  if (sigma <= -1.0 + 1e-12) {
    throw Error(ErrorKind::NoConvergence,
                "non-integrable endpoint (local exponent " + fmt(sigma) +
                    ") at " + where);
  }
  const double nearest = std::round(sigma);
  if (nearest >= -0.25 && std::abs(sigma - nearest) < 1e-9) return 1.0;
  if (sigma >= 3.0) return 1.0;
  return std::min(40.0, std::ceil(5.0 / (sigma + 1.0)));
}

struct Cell {
  std::size_t piece = 0;
  double u_lo = 0.0, u_hi = 1.0;
  int graded_end = 0;  // -1: singular behavior at u_lo, +1: at u_hi, 0: none
  double m = 1.0;      // grading power
  int inf_end = 0;     // -1: t0 = -inf (at u = 0), +1: t1 = +inf (at u = 1)
  double T = 1.0;      // tail scale in t-units when inf_end != 0
};

struct NodeEval {
  cplx value{0.0, 0.0};  // scaled integrand * jacobian
  double log_mag = -kInf;
};

class Integrand {
 public:
  Integrand(const BranchedFactors& factors, const Contour& contour,
            const Weight& weight)
      : tracker_(contour, factors), weight_(weight), contour_(&contour) {}

  const BranchTracker& tracker() const { return tracker_; }

  // Full log of psi(z(t)) * w(z(t)) * dz/dx at cell parameter x; the
  // jacobian's complex phase is carried in the imaginary part.
  cplx log_at(const Cell& c, double x) const {
    double u, dudx;
    const double w = c.u_hi - c.u_lo;
    if (c.graded_end == -1) {
      const double xm = std::pow(x, c.m);
      u = c.u_lo + w * xm;
      dudx = w * c.m * std::pow(x, c.m - 1.0);
    } else if (c.graded_end == +1) {
      const double xm = std::pow(1.0 - x, c.m);
      u = c.u_hi - w * xm;
      dudx = w * c.m * std::pow(1.0 - x, c.m - 1.0);
    } else {
      u = c.u_lo + w * x;
      dudx = w;
    }
    const Piece& p = contour_->pieces[c.piece];
    double t, dtdu;
    if (c.inf_end == -1) {
      if (u <= 0.0) return cplx(-kInf, 0.0);
      t = p.t1 - c.T * (1.0 - u) / u;
      dtdu = c.T / (u * u);
    } else if (c.inf_end == +1) {
      if (u >= 1.0) return cplx(-kInf, 0.0);
      t = p.t0 + c.T * u / (1.0 - u);
      dtdu = c.T / ((1.0 - u) * (1.0 - u));
    } else {
      t = p.t0 + (p.t1 - p.t0) * u;
      dtdu = p.t1 - p.t0;
    }
    const cplx z = p.at(t);
    cplx lf = tracker_.log_product({c.piece, t});
    if (weight_.exp_rate != 0.0) lf -= weight_.exp_rate * z;
    if (weight_.pole) {
      const cplx d = z - cplx(*weight_.pole, 0.0);
      if (std::abs(d) == 0.0) return cplx(kInf, 0.0);  // caught by caller
      lf -= std::log(d);
    }
    const double jac_mag = std::abs(dudx) * std::abs(dtdu);
    if (jac_mag == 0.0) return cplx(-kInf, 0.0);
    cplx jac_phase = p.dir * (dtdu < 0.0 ? -1.0 : 1.0);
    lf += cplx(std::log(jac_mag * std::abs(p.dir)), std::arg(jac_phase));
    if (weight_.negated_pole) lf += cplx(0.0, M_PI);  // multiply by -1
    return lf;
  }

  NodeEval eval(const Cell& c, double x, double log_scale, bool abs_mode) const {
    const cplx lf = log_at(c, x);
    NodeEval out;
    out.log_mag = lf.real();
    if (lf.real() == -kInf) {
      out.value = cplx(0.0, 0.0);
    } else if (abs_mode) {
      out.value = cplx(std::exp(lf.real() - log_scale), 0.0);
    } else {
      out.value = std::exp(lf - cplx(log_scale, 0.0));
    }
    return out;
  }

 private:
  BranchTracker tracker_;
  Weight weight_;
  const Contour* contour_;
};

struct Panel {
  std::size_t cell = 0;
  double xa = 0.0, xb = 1.0;
  cplx value{0.0, 0.0};
  double err = 0.0;
  double max_log = -kInf;
};

struct PanelOrder {
  bool operator()(const Panel& a, const Panel& b) const { return a.err < b.err; }
};

Panel rate_panel(const Integrand& f, const std::vector<Cell>& cells,
                 std::size_t cell, double xa, double xb, double log_scale,
                 bool abs_mode) {
  Panel p;
  p.cell = cell;
  p.xa = xa;
  p.xb = xb;
  const double c = 0.5 * (xa + xb);
  const double h = 0.5 * (xb - xa);
  cplx k15(0.0, 0.0), g7(0.0, 0.0);
  for (int i = 0; i < 8; ++i) {
    const double dx = h * kXgk[i];
    NodeEval lo = f.eval(cells[cell], c - dx, log_scale, abs_mode);
    p.max_log = std::max(p.max_log, lo.log_mag);
    if (i == 7) {
      k15 += kWgk[7] * lo.value;
      g7 += kWg[3] * lo.value;
      break;
    }
    NodeEval hi = f.eval(cells[cell], c + dx, log_scale, abs_mode);
    p.max_log = std::max(p.max_log, hi.log_mag);
    k15 += kWgk[i] * (lo.value + hi.value);
    if (i % 2 == 1) g7 += kWg[i / 2] * (lo.value + hi.value);
  }
  p.value = h * k15;
  p.err = std::abs(h * (k15 - g7));
  return p;
}

IntegralResult run_integration(const BranchedFactors& factors,
                               const Contour& contour, const Weight& weight,
                               const QuadratureConfig& config, bool abs_mode) {
  if (contour.pieces.empty()) {
    throw Error(ErrorKind::BadIndex, "empty contour");
  }
  Integrand f(factors, contour, weight);

  // Build cells with endpoint gradings and tail transforms.
  std::vector<Cell> cells;
  for (std::size_t m = 0; m < contour.pieces.size(); ++m) {
    const Piece& p = contour.pieces[m];
    Cell base;
    base.piece = m;
    double sigma_lo = 0.0, sigma_hi = 0.0;

    auto tail_setup = [&](const cplx& d_inf) -> std::pair<double, double> {
      // Returns {T, sigma_at_infinity}.
      if (weight.exp_rate != 0.0) {
        const double rate = weight.exp_rate * d_inf.real();
        if (rate <= 0.0) {
          throw Error(ErrorKind::DivergentTail,
                      "exponential weight does not decay along " +
                          contour.label);
        }
        return {std::min(std::max(1.0 / rate, 1e-8), 1e8), 0.0};
      }
      double etot = factors.total_exponent();
      if (weight.pole) etot -= 1.0;
      if (etot >= -1.0 - 1e-9) {
        throw Error(ErrorKind::DivergentTail,
                    "algebraic tail does not decay along " + contour.label);
      }
      const double T = (factors.scale() + std::abs(p.ref_point())) / std::abs(p.dir);
      return {std::min(std::max(T, 1e-8), 1e8), -etot - 2.0};
    };

    if (p.from_infinity()) {
      base.inf_end = -1;
      auto [T, sig] = tail_setup(-p.dir);
      base.T = T;
      sigma_lo = sig;
    } else {
      sigma_lo = exponent_near(factors, p.at(p.t0), weight.pole, false);
    }
    if (p.to_infinity()) {
      base.inf_end = +1;
      auto [T, sig] = tail_setup(p.dir);
      base.T = T;
      sigma_hi = sig;
    } else {
      sigma_hi = exponent_near(factors, p.at(p.t1), weight.pole, false);
    }

    const double m_lo = grading_power(sigma_lo, contour.label + " start");
    const double m_hi = grading_power(sigma_hi, contour.label + " end");
    if (m_lo > 1.0 && m_hi > 1.0) {
      Cell a = base, b = base;
      a.u_hi = 0.5;
      a.graded_end = -1;
      a.m = m_lo;
      b.u_lo = 0.5;
      b.graded_end = +1;
      b.m = m_hi;
      cells.push_back(a);
      cells.push_back(b);
    } else if (m_lo > 1.0) {
      base.graded_end = -1;
      base.m = m_lo;
      cells.push_back(base);
    } else if (m_hi > 1.0) {
      base.graded_end = +1;
      base.m = m_hi;
      cells.push_back(base);
    } else {
      cells.push_back(base);
    }
  }

  const int init = std::max(1, config.initial_panels);
  double log_scale = 0.0;

  for (int attempt = 0; attempt < 4; ++attempt) {
    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
    cplx total(0.0, 0.0);
    double err_total = 0.0;
    double sum_abs = 0.0;  // sum of |panel value|: the roundoff noise scale
    double max_log = -kInf;
    int n_panels = 0;

    auto push = [&](Panel&& p) {
      total += p.value;
      err_total += p.err;
      sum_abs += std::abs(p.value);
      max_log = std::max(max_log, p.max_log);
      ++n_panels;
      heap.push(std::move(p));
    };

    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
      for (int k = 0; k < init; ++k) {
        const double xa = static_cast<double>(k) / init;
        const double xb = static_cast<double>(k + 1) / init;
        push(rate_panel(f, cells, ci, xa, xb, log_scale, abs_mode));
      }
    }

    if (attempt == 0 && max_log > -kInf) {
      // First pass with no scaling only probes magnitudes; restart with the
      // probe maximum folded out so node values stay O(1).
      if (std::abs(max_log) > 1.0) {
        log_scale = max_log;
        continue;
      }
    }
    if (max_log == -kInf) {
      return IntegralResult{cplx(0.0, 0.0), 0.0, 0.0, n_panels};
    }

    const double abs_floor =
        (log_scale > 700.0) ? 0.0 : config.abs_tol * std::exp(-log_scale);
    bool rescale = false;
    while (true) {
      if (max_log - log_scale > 650.0) {
        // A refined panel exposed magnitudes far above the probe estimate;
        // fold them into the scale and restart.
        log_scale = max_log;
        rescale = true;
        break;
      }
      // Cancellation-heavy integrals (true value near zero) bottom out at
      // the roundoff of the accumulated magnitudes; demanding less than that
      // would spin the panel budget for nothing.
      const double noise_floor = 64.0 * kEps * sum_abs;
      const double target = std::max({config.rel_tol * std::abs(total),
                                      abs_floor, noise_floor});
      if (err_total <= target) break;
      if (n_panels >= config.max_panels) {
        throw Error(ErrorKind::NoConvergence,
                    "panel budget exhausted on " + contour.label +
                        " (error " + fmt(err_total) + ", target " +
                        fmt(target) + ")");
      }
      Panel worst = heap.top();
      heap.pop();
      total -= worst.value;
      err_total -= worst.err;
      sum_abs -= std::abs(worst.value);
      const double xm = 0.5 * (worst.xa + worst.xb);
      push(rate_panel(f, cells, worst.cell, worst.xa, xm, log_scale, abs_mode));
      push(rate_panel(f, cells, worst.cell, xm, worst.xb, log_scale, abs_mode));
      n_panels -= 1;  // parent replaced by two children
    }
    if (rescale) continue;

    // Exact re-accumulation to remove incremental drift.
    std::vector<Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
      all.push_back(heap.top());
      heap.pop();
    }
    cplx sum(0.0, 0.0);
    double err = 0.0;
    for (const Panel& p : all) {
      sum += p.value;
      err += p.err;
    }
    return IntegralResult{sum, log_scale, err, static_cast<int>(all.size())};
  }
  throw Error(ErrorKind::NoConvergence,
              "scaling did not stabilize on " + contour.label);
}

}  // namespace

IntegralResult integrate_factors(const BranchedFactors& factors,
                                 const Contour& contour, const Weight& weight,
                                 const QuadratureConfig& config) {
  return run_integration(factors, contour, weight, config, false);
}

IntegralResult integrate_factors_abs(const BranchedFactors& factors,
                                     const Contour& contour, const Weight& weight,
                                     const QuadratureConfig& config) {
  return run_integration(factors, contour, weight, config, true);
}

IntegralResult integrate(const OUModel& model, const Contour& contour,
                         const Weight& weight, const QuadratureConfig& config) {
  return integrate_factors(BranchedFactors::from_model(model), contour, weight,
                           config);
}

cplx integrate_function(const std::function<cplx(double)>& f, double a, double b,
                        double rel_tol, double abs_tol, int max_panels) {
  if (!(b > a)) return cplx(0.0, 0.0);
  struct FPanel {
    double a, b;
    cplx value;
    double err;
  };
  auto rate = [&](double xa, double xb) {
    FPanel p{xa, xb, cplx(0.0, 0.0), 0.0};
    const double c = 0.5 * (xa + xb);
    const double h = 0.5 * (xb - xa);
    cplx k15(0.0, 0.0), g7(0.0, 0.0);
    for (int i = 0; i < 8; ++i) {
      const double dx = h * kXgk[i];
      const cplx lo = f(c - dx);
      if (i == 7) {
        k15 += kWgk[7] * lo;
        g7 += kWg[3] * lo;
        break;
      }
      const cplx hi = f(c + dx);
      k15 += kWgk[i] * (lo + hi);
      if (i % 2 == 1) g7 += kWg[i / 2] * (lo + hi);
    }
    p.value = h * k15;
    p.err = std::abs(h * (k15 - g7));
    return p;
  };
  auto cmp = [](const FPanel& x, const FPanel& y) { return x.err < y.err; };
  std::priority_queue<FPanel, std::vector<FPanel>, decltype(cmp)> heap(cmp);
  cplx total(0.0, 0.0);
  double err_total = 0.0;
  int n = 0;
  auto push = [&](FPanel&& p) {
    total += p.value;
    err_total += p.err;
    ++n;
    heap.push(std::move(p));
  };
  push(rate(a, 0.5 * (a + b)));
  push(rate(0.5 * (a + b), b));
  while (err_total > std::max(rel_tol * std::abs(total), abs_tol)) {
    if (n >= max_panels) {
      throw Error(ErrorKind::NoConvergence,
                  "interval quadrature budget exhausted (error " +
                      fmt(err_total) + ")");
    }
    FPanel worst = heap.top();
    heap.pop();
    total -= worst.value;
    err_total -= worst.err;
    --n;
    const double mid = 0.5 * (worst.a + worst.b);
    push(rate(worst.a, mid));
    push(rate(mid, worst.b));
  }
  return total;
}

IntegralResult integrate_reference(const ReferenceContour& ref, double power,
                                   int sign, const QuadratureConfig& config) {
  if (sign != 1 && sign != -1) {
    throw Error(ErrorKind::BadIndex, "reference sign must be +1 or -1");
  }
  BranchedFactors f;
  f.points = {0.0};
  f.exponents = {power};
  // sign = -1 integrates z^power * exp(-z); sign = +1 integrates
  // z^power * exp(+z).  Weight.exp_rate multiplies exp(-rate*z).
  Weight w = Weight::exponential(sign == -1 ? 1.0 : -1.0);
  return integrate_factors(f, build_reference(ref), w, config);
}

namespace {

double endpoint_magnitude(const OUModel& model, const BranchTracker& tracker,
                          const Contour& contour, double y, const PathPos& pos) {
  const Piece& p = contour.pieces[pos.piece];
  const cplx z = p.at(pos.t);
  const cplx lp = tracker.log_product(pos);
  if (lp.real() == -kInf) return 0.0;
  (void)model;
  const double lm = lp.real() + std::log(std::abs(z) + 1e-300) - y * z.real();
  return std::exp(std::min(lm, 700.0));
}

ConditionItem endpoint_matching_item(const OUModel& model, const Contour& contour,
                                     const BranchTracker& tracker, double y,
                                     const std::string& name) {
  // The boundary terms psi(z)*z*exp(-y*z) must share one limit (zero) at
  // both ends of the path: exactly zero at finite ends (which sit on kernel
  // zeros) and decaying along rays.
  ConditionItem item;
  item.name = name;
  double worst = 0.0;
  bool ok = true;
  const double far0 = 50.0 * (1.0 + BranchedFactors::from_model(model).scale());
  for (std::size_t m = 0; m < contour.pieces.size(); ++m) {
    const Piece& p = contour.pieces[m];
    const bool first = (m == 0);
    const bool last = (m + 1 == contour.pieces.size());
    if (first) {
      if (p.from_infinity()) {
        double prev = kInf;
        double mag = 0.0;
        for (double fac : {1.0, 10.0, 100.0}) {
          mag = endpoint_magnitude(model, tracker, contour, y,
                                   {m, p.t1 - far0 * fac});
          if (mag > prev * 1.0000001) ok = false;
          prev = mag;
        }
        worst = std::max(worst, mag);
      } else {
        worst = std::max(worst, endpoint_magnitude(model, tracker, contour, y,
                                                   {m, p.t0}));
      }
    }
    if (last) {
      if (p.to_infinity()) {
        double prev = kInf;
        double mag = 0.0;
        for (double fac : {1.0, 10.0, 100.0}) {
          mag = endpoint_magnitude(model, tracker, contour, y,
                                   {m, p.t0 + far0 * fac});
          if (mag > prev * 1.0000001) ok = false;
          prev = mag;
        }
        worst = std::max(worst, mag);
      } else {
        worst = std::max(worst, endpoint_magnitude(model, tracker, contour, y,
                                                   {m, p.t1}));
      }
    }
  }
  item.value = worst;
  item.pass = ok && worst < 1e-6;
  return item;
}

ConditionItem integral_item(const OUModel& model, const Contour& contour,
                            const Weight& w, const QuadratureConfig& config,
                            const std::string& name) {
  ConditionItem item;
  item.name = name;
  try {
    const IntegralResult r = integrate_factors_abs(
        BranchedFactors::from_model(model), contour, w, config);
    const double v = r.value.real() * ((r.log_scale < 700.0 && r.log_scale > -700.0)
                                           ? std::exp(r.log_scale)
                                           : kInf);
    item.value = v;
    item.pass = std::isfinite(v);
  } catch (const Error&) {
    item.value = kInf;
    item.pass = false;
  }
  return item;
}

}  // namespace

ConditionReport check_conditions(const OUModel& model, const Contour& contour,
                                 double level, ContourRole role,
                                 const QuadratureConfig& config) {
  ConditionReport rep;
  QuadratureConfig loose = config;
  loose.rel_tol = std::max(config.rel_tol, 1e-6);
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  BranchTracker tracker(contour, BranchedFactors::from_model(model));

  auto add = [&](ConditionItem&& item) {
    rep.all_pass = rep.all_pass && item.pass;
    rep.items.push_back(std::move(item));
  };

  switch (role) {
    case ContourRole::UpperPositive: {
      add(integral_item(model, contour, Weight::none(), loose, "|psi| integrable"));
      for (double y : {0.05, 1.0}) {
        // |z| growth is captured by the pole-free weight with an extra |z|
        // factor; approximate with exp weight plus the |psi| bound at the
        // sampled damping rate (the engine has no |z| weight, so use the
        // exponential weight which dominates the check's purpose).
        add(integral_item(model, contour, Weight::exponential(y), loose,
                          "|psi| e^{-" + fmt(y) + " Re z} integrable"));
      }
      for (int k = 1; k <= r; ++k) {
        add(integral_item(model, contour, Weight::pole_at(model.mu(k)), loose,
                          "|psi/(z-mu_" + std::to_string(k) + ")| integrable"));
      }
      for (int d = 1; d <= s; ++d) {
        add(integral_item(model, contour, Weight::pole_at(-model.nu(d)), loose,
                          "|psi/(z+nu_" + std::to_string(d) + ")| integrable"));
      }
      for (double y : {0.05, 1.0}) {
        add(endpoint_matching_item(model, contour, tracker, y,
                                   "boundary term vanishes at y=" + fmt(y)));
      }
      break;
    }
    case ContourRole::LevelWindow: {
      add(integral_item(model, contour, Weight::none(), loose, "|psi| integrable"));
      add(integral_item(model, contour, Weight::exponential(level), loose,
                        "|psi| e^{-level Re z} integrable"));
      for (double y : {level, -0.05 * std::min(1.0, std::abs(level))}) {
        add(integral_item(model, contour, Weight::exponential(y), loose,
                          "|psi| e^{-" + fmt(y) + " Re z} integrable"));
      }
      for (int k = 1; k <= r; ++k) {
        add(integral_item(model, contour, Weight::pole_at(model.mu(k)), loose,
                          "|psi/(z-mu_" + std::to_string(k) + ")| integrable"));
        add(integral_item(
            model, contour, Weight::exp_pole(level, model.mu(k)), loose,
            "|psi/(z-mu_" + std::to_string(k) + ")| e^{-level Re z} integrable"));
      }
      for (int d = 1; d <= s; ++d) {
        add(integral_item(model, contour, Weight::pole_at(-model.nu(d)), loose,
                          "|psi/(z+nu_" + std::to_string(d) + ")| integrable"));
      }
      for (double y : {level, 0.5 * level}) {
        add(endpoint_matching_item(model, contour, tracker, y,
                                   "boundary term vanishes at y=" + fmt(y)));
      }
      break;
    }
    case ContourRole::SingleEigenfunction: {
      add(integral_item(model, contour, Weight::exponential(level), loose,
                        "|psi| e^{-level Re z} integrable"));
      for (int k = 1; k <= r; ++k) {
        add(integral_item(
            model, contour, Weight::exp_pole(level, model.mu(k)), loose,
            "|psi/(z-mu_" + std::to_string(k) + ")| e^{-level Re z} integrable"));
      }
      add(endpoint_matching_item(model, contour, tracker, level,
                                 "boundary term vanishes at y=level"));
      break;
    }
    case ContourRole::FiniteNegativeDrift: {
      for (int k = 1; k <= r; ++k) {
        add(integral_item(
            model, contour, Weight::exp_pole(level, model.mu(k)), loose,
            "|psi/(z-mu_" + std::to_string(k) + ")| e^{-level Re z} integrable"));
      }
      // Endpoints of the finite paths sit on kernel zeros.
      for (std::size_t m : {std::size_t(0), contour.pieces.size() - 1}) {
        const Piece& p = contour.pieces[m];
        const double t = (m == 0) ? p.t0 : p.t1;
        const cplx lp = tracker.log_product({m, t});
        ConditionItem item;
        item.name = "kernel vanishes at path endpoint";
        item.value = (lp.real() == -kInf) ? 0.0 : std::exp(std::min(lp.real(), 700.0));
        item.pass = item.value < 1e-8;
        add(std::move(item));
      }
      break;
    }
  }
  return rep;
}

}  // namespace oujump

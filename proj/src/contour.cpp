#include "oujump/contour.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oujump/errors.hpp"

namespace oujump {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

/// Largest singular branch point strictly below mu_i (the origin is always
/// singular, so this is well defined for every i >= 1).
double largest_singularity_below(const std::vector<PointClass>& pts, double mu_i) {
  double best = -kInf;
  for (const PointClass& pc : pts) {
    if (pc.kind == PointKind::Singularity && pc.location < mu_i - 1e-14) {
      best = std::max(best, pc.location);
    }
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorKind::BadIndex, "no singular point below " + fmt(mu_i));
  }
  return best;
}

/// Shift a prospective wedge vertex off any branch point it accidentally hits.
double nudged(double vertex, double lo, double hi,
              const std::vector<PointClass>& pts) {
  const double scale = 1.0 + std::max(std::abs(lo), std::abs(hi));
  for (const PointClass& pc : pts) {
    if (std::abs(pc.location - vertex) < 1e-9 * scale) {
      return vertex + 0.1 * (hi - lo);
    }
  }
  return vertex;
}

const PointClass& point_by_signed_index(const std::vector<PointClass>& pts,
                                        int s, int r, int j) {
  if (j < -s || j > r) {
    throw Error(ErrorKind::BadIndex,
                "branch index " + std::to_string(j) + " outside -" +
                    std::to_string(s) + ".." + std::to_string(r));
  }
  // pts is ordered (-nu_s .. -nu_1, 0, mu_1 .. mu_r); the origin sits at s.
  return pts[static_cast<std::size_t>(j + s)];
}

Contour right_wedge(double vertex, const std::string& label) {
  Contour c;
  c.pieces = {Piece{cplx(vertex, 0.0), cplx(-1.0, 1.0), -kInf, 0.0},
              Piece{cplx(vertex, 0.0), cplx(1.0, 1.0), 0.0, kInf}};
  c.anchor = cplx(vertex, 0.0);
  c.label = label;
  return c;
}

Contour left_wedge(double vertex, const std::string& label) {
  Contour c;
  c.pieces = {Piece{cplx(vertex, 0.0), cplx(1.0, 1.0), -kInf, 0.0},
              Piece{cplx(vertex, 0.0), cplx(-1.0, 1.0), 0.0, kInf}};
  c.anchor = cplx(vertex, 0.0);
  c.label = label;
  return c;
}

}  // namespace

Contour build_gamma_positive_at(const OUModel& model, int i, double vertex) {
  const int r = static_cast<int>(model.r());
  if (i < 1 || i > r) {
    throw Error(ErrorKind::BadIndex, "upper path index " + std::to_string(i) +
                                         " outside 1.." + std::to_string(r));
  }
  const auto pts = classify_points(model);
  const PointClass& pc = point_by_signed_index(pts, static_cast<int>(model.s()), r, i);
  const double mu_i = pc.location;
  if (pc.kind == PointKind::Zero) {
    Contour c;
    c.pieces = {Piece{cplx(mu_i, 0.0), cplx(1.0, 1.0), 0.0, kInf}};
    c.anchor = cplx(mu_i, 0.0);
    c.label = "upper ray @ " + fmt(mu_i);
    return c;
  }
  const double lo = largest_singularity_below(pts, mu_i);
  if (!(vertex > lo && vertex < mu_i)) {
    throw Error(ErrorKind::BadIndex, "wedge vertex " + fmt(vertex) +
                                         " outside (" + fmt(lo) + ", " +
                                         fmt(mu_i) + ")");
  }
  return right_wedge(vertex, "upper wedge @ " + fmt(vertex) + " under " + fmt(mu_i));
}

Contour build_gamma_positive(const OUModel& model, int i) {
  const int r = static_cast<int>(model.r());
  if (i < 1 || i > r) {
    throw Error(ErrorKind::BadIndex, "upper path index " + std::to_string(i) +
                                         " outside 1.." + std::to_string(r));
  }
  const auto pts = classify_points(model);
  const PointClass& pc = point_by_signed_index(pts, static_cast<int>(model.s()), r, i);
  if (pc.kind == PointKind::Zero) {
    return build_gamma_positive_at(model, i, pc.location);
  }
  const double lo = largest_singularity_below(pts, pc.location);
  const double vertex = nudged(0.5 * (lo + pc.location), lo, pc.location, pts);
  return build_gamma_positive_at(model, i, vertex);
}

Contour build_gamma_level_at(const OUModel& model, int j, double vertex) {
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  const auto pts = classify_points(model);
  const PointClass& pc = point_by_signed_index(pts, s, r, j);
  if (pc.kind == PointKind::Zero) {
    Contour c;
    c.pieces = {Piece{cplx(pc.location, 0.0), cplx(-1.0, 1.0), 0.0, kInf}};
    c.anchor = cplx(pc.location, 0.0);
    c.label = "level ray @ " + fmt(pc.location);
    return c;
  }
  const double next =
      (j == r) ? pc.location + 2.0
               : point_by_signed_index(pts, s, r, j + 1).location;
  if (!(vertex > pc.location && vertex < next)) {
    throw Error(ErrorKind::BadIndex, "wedge vertex " + fmt(vertex) +
                                         " outside (" + fmt(pc.location) + ", " +
                                         fmt(next) + ")");
  }
  return left_wedge(vertex, "level wedge @ " + fmt(vertex) + " over " +
                                fmt(pc.location));
}

Contour build_gamma_level(const OUModel& model, int j) {
  const int r = static_cast<int>(model.r());
  const int s = static_cast<int>(model.s());
  const auto pts = classify_points(model);
  const PointClass& pc = point_by_signed_index(pts, s, r, j);
  if (pc.kind == PointKind::Zero) {
    return build_gamma_level_at(model, j, pc.location);
  }
  const double next =
      (j == r) ? pc.location + 2.0
               : point_by_signed_index(pts, s, r, j + 1).location;
  const double vertex = nudged(0.5 * (pc.location + next), pc.location, next, pts);
  return build_gamma_level_at(model, j, vertex);
}

Contour build_gamma_finite(const OUModel& model, int i, double level, double a) {
  if (model.kappa >= 0.0) {
    throw Error(ErrorKind::BadScenario,
                "finite paths require inward drift (kappa < 0)");
  }
  const int r = static_cast<int>(model.r());
  if (i < 2 || i > r) {
    throw Error(ErrorKind::BadIndex, "finite path index " + std::to_string(i) +
                                         " outside 2.." + std::to_string(r));
  }
  if (!(a > 0.0)) {
    throw Error(ErrorKind::BadIndex, "offset parameter must be positive");
  }
  const auto pts = classify_points(model);
  const int s = static_cast<int>(model.s());
  const double mu_1 = point_by_signed_index(pts, s, r, 1).location;
  const PointClass& pc = point_by_signed_index(pts, s, r, i);
  const double mu_i = pc.location;

  if (pc.kind == PointKind::Zero) {
    // Two-segment V from mu_i down to the apex and back up to mu_1.
    const double w = mu_i - mu_1;
    Contour c;
    c.pieces = {Piece{cplx(mu_i, 0.0), cplx(-1.0, -1.0), 0.0, 0.5 * w},
                Piece{cplx(mu_i, -w), cplx(-1.0, 1.0), 0.5 * w, w}};
    c.anchor = cplx(mu_i, 0.0);
    c.label = "V path " + fmt(mu_i) + " -> " + fmt(mu_1);
    return c;
  }

  // Closed clockwise diamond around mu_i with endpoints at mu_1.  The right
  // vertex approaches mu_i as the level recedes so that exp(-level*z) does
  // not overwhelm the kernel's zero at mu_1.
  double delta = a / std::max(1.0, -level);
  if (i < r) {
    const double next = point_by_signed_index(pts, s, r, i + 1).location;
    delta = std::min(delta, 0.5 * (next - mu_i));
  }
  const double c_right = mu_i + delta;
  const double h = c_right - mu_1;
  const cplx top(mu_1 + 0.5 * h, 0.5 * h);
  const cplx bottom(mu_1 + 0.5 * h, -0.5 * h);
  const cplx left(mu_1, 0.0);
  const cplx right(c_right, 0.0);

  Contour c;
  c.pieces = {Piece{left, top - left, 0.0, 1.0},
              Piece{top, right - top, 0.0, 1.0},
              Piece{right, bottom - right, 0.0, 1.0},
              Piece{bottom, left - bottom, 0.0, 1.0}};
  c.anchor = right;
  c.label = "diamond around " + fmt(mu_i);
  return c;
}

Contour build_reference(const ReferenceContour& ref) {
  const double a = ref.a;
  if (!(a > 0.0)) {
    throw Error(ErrorKind::BadIndex, "reference offset must be positive");
  }
  Contour c;
  switch (ref.kind) {
    case ReferenceKind::Gamma0:
      c.pieces = {Piece{cplx(0.0, 0.0), cplx(1.0, 1.0), 0.0, kInf}};
      c.anchor = cplx(0.0, 0.0);
      c.label = "reference ray (1+i)t";
      break;
    case ReferenceKind::GammaMinusA:
      c = right_wedge(-a, "reference wedge @ -" + fmt(a));
      break;
    case ReferenceKind::GammaPlusA:
      c = right_wedge(a, "reference wedge @ +" + fmt(a));
      break;
    case ReferenceKind::GammaTildeRay:
      c.pieces = {Piece{cplx(0.0, 0.0), cplx(-1.0, 1.0), 0.0, kInf}};
      c.anchor = cplx(0.0, 0.0);
      c.label = "reference ray (-1+i)t";
      break;
    case ReferenceKind::GammaTildeA:
      c = left_wedge(a, "reference left wedge @ " + fmt(a));
      break;
    case ReferenceKind::MinusGamma:
      c.pieces = {Piece{cplx(0.0, 0.0), cplx(-1.0, -1.0), 0.0, kInf}};
      c.anchor = cplx(0.0, 0.0);
      c.label = "reference ray (-1-i)t";
      break;
    case ReferenceKind::MinusGammaA:
      c.pieces = {Piece{cplx(a, 0.0), cplx(1.0, -1.0), -kInf, 0.0},
                  Piece{cplx(a, 0.0), cplx(-1.0, -1.0), 0.0, kInf}};
      c.anchor = cplx(a, 0.0);
      c.label = "reference left wedge @ " + fmt(a) + " (clockwise)";
      break;
  }
  return c;
}

Contour reversed(const Contour& c) {
  Contour out;
  out.anchor = c.anchor;
  out.label = c.label + " (reversed)";
  for (auto it = c.pieces.rbegin(); it != c.pieces.rend(); ++it) {
    // z(t) = base + dir*t on [t0,t1] traversed backwards is
    // z(u) = base - dir*u on [-t1,-t0].
    out.pieces.push_back(Piece{it->base, -it->dir, -it->t1, -it->t0});
  }
  return out;
}

Contour conjugated(const Contour& c) {
  Contour out;
  out.anchor = std::conj(c.anchor);
  out.label = c.label + " (conjugated)";
  for (const Piece& p : c.pieces) {
    out.pieces.push_back(Piece{std::conj(p.base), std::conj(p.dir), p.t0, p.t1});
  }
  return out;
}

}  // namespace oujump

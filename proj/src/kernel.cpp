#include "oujump/kernel.hpp"

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

}  // namespace

BranchedFactors BranchedFactors::from_model(const OUModel& model) {
  BranchedFactors f;
  const auto pts = classify_points(model);
  f.points.reserve(pts.size());
  f.exponents.reserve(pts.size());
  for (const PointClass& pc : pts) {
    f.points.push_back(pc.location);
    f.exponents.push_back(pc.exponent);
  }
  return f;
}

double BranchedFactors::exponent_at(double z0) const {
  const double tol = 1e-12 * scale();
  double sum = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (std::abs(points[j] - z0) <= tol) sum += exponents[j];
  }
  return sum;
}

double BranchedFactors::total_exponent() const {
  double sum = 0.0;
  for (double e : exponents) sum += e;
  return sum;
}

double BranchedFactors::scale() const {
  double m = 0.0;
  for (double p : points) m = std::max(m, std::abs(p));
  return 1.0 + m;
}

BranchTracker::BranchTracker(const Contour& contour, BranchedFactors factors)
    : contour_(&contour), factors_(std::move(factors)) {
  if (contour.pieces.empty()) {
    throw Error(ErrorKind::BadIndex, "empty contour");
  }
  const std::size_t n = contour.pieces.size();
  scale_ = factors_.scale() + std::abs(contour.anchor);
  const double tol = 1e-12 * scale_;

  boundaries_.assign(n + 1, cplx(0.0, 0.0));
  boundary_finite_.assign(n + 1, true);
  for (std::size_t m = 0; m < n; ++m) {
    const Piece& p = contour.pieces[m];
    if (p.from_infinity()) {
      if (m != 0) {
        throw Error(ErrorKind::BadIndex,
                    "interior piece cannot arrive from infinity");
      }
      boundary_finite_[0] = false;
    } else {
      boundaries_[m] = p.at(p.t0);
    }
    if (p.to_infinity()) {
      if (m + 1 != n) {
        throw Error(ErrorKind::BadIndex,
                    "interior piece cannot leave toward infinity");
      }
      boundary_finite_[n] = false;
    } else {
      boundaries_[m + 1] = p.at(p.t1);
    }
  }
  // Adjacent pieces must share their junction points.
  for (std::size_t m = 0; m + 1 < n; ++m) {
    const Piece& p = contour.pieces[m];
    const Piece& q = contour.pieces[m + 1];
    if (std::abs(p.at(p.t1) - q.at(q.t0)) > 1e-9 * scale_) {
      throw Error(ErrorKind::BadIndex, "contour pieces are not connected");
    }
  }

  // Locate the anchor among the finite boundaries, preferring one with an
  // outgoing piece so an on-branch-point anchor can use its departure
  // direction.
  std::size_t m_star = n + 1;
  for (std::size_t m = 0; m <= n; ++m) {
    if (boundary_finite_[m] && std::abs(boundaries_[m] - contour.anchor) <= tol) {
      m_star = m;
      break;
    }
  }
  if (m_star > n) {
    throw Error(ErrorKind::BadIndex, "anchor is not a boundary point of the contour");
  }

  const std::size_t nb = factors_.points.size();
  theta_.assign(n + 1, std::vector<double>(nb, 0.0));

  for (std::size_t j = 0; j < nb; ++j) {
    const cplx b(factors_.points[j], 0.0);
    const cplx d0 = contour.anchor - b;
    double theta0;
    if (std::abs(d0) <= tol) {
      // Anchor sits on the branch point: initialize with the principal
      // argument of the direction the path leaves it in.
      const cplx dir = (m_star < n) ? contour.pieces[m_star].dir
                                    : -contour.pieces[n - 1].dir;
      theta0 = std::arg(dir);
    } else {
      theta0 = std::arg(d0);
    }
    theta_[m_star][j] = theta0;

    auto step = [&](std::size_t from, std::size_t to) {
      // Boundaries `from` and `to` bracket one piece; both finite here.
      const cplx zs = boundaries_[from] - b;
      const cplx ze = boundaries_[to] - b;
      if (std::abs(zs) <= tol || std::abs(ze) <= tol) {
        // A piece touching the branch point at an endpoint carries a
        // constant argument along its interior (and its limits).
        theta_[to][j] = theta_[from][j];
      } else {
        theta_[to][j] = theta_[from][j] + std::arg(ze / zs);
      }
    };
    for (std::size_t m = m_star; m < n && boundary_finite_[m + 1]; ++m) {
      step(m, m + 1);
    }
    for (std::size_t m = m_star; m > 0 && boundary_finite_[m - 1]; --m) {
      step(m, m - 1);
    }
  }
}

std::size_t BranchTracker::ref_boundary(std::size_t piece) const {
  return boundary_finite_[piece] ? piece : piece + 1;
}

cplx BranchTracker::log_factor(const PathPos& pos, std::size_t j) const {
  const Piece& p = contour_->pieces[pos.piece];
  const cplx z = p.at(pos.t);
  const cplx b(factors_.points[j], 0.0);
  const double tol = 1e-12 * scale_;
  const std::size_t ref = ref_boundary(pos.piece);
  const cplx zb = z - b;
  const cplx rb = boundaries_[ref] - b;
  double theta;
  if (std::abs(rb) <= tol) {
    theta = theta_[ref][j];  // constant along a piece touching b
  } else {
    theta = theta_[ref][j] + std::arg(zb / rb);
  }
  return cplx(std::log(std::abs(zb)), theta);
}

cplx BranchTracker::log_product(const PathPos& pos) const {
  cplx sum(0.0, 0.0);
  const Piece& p = contour_->pieces[pos.piece];
  const cplx z = p.at(pos.t);
  for (std::size_t j = 0; j < factors_.points.size(); ++j) {
    if (std::abs(z - cplx(factors_.points[j], 0.0)) == 0.0 &&
        factors_.exponents[j] < 0.0) {
      throw Error(ErrorKind::AtBranchPoint,
                  "evaluation at singular branch point " +
                      fmt(factors_.points[j]));
    }
    sum += factors_.exponents[j] * log_factor(pos, j);
  }
  return sum;
}

cplx BranchTracker::log_product_excluding(const PathPos& pos, double excluded) const {
  const double tol = 1e-12 * scale_;
  cplx sum(0.0, 0.0);
  const Piece& p = contour_->pieces[pos.piece];
  const cplx z = p.at(pos.t);
  for (std::size_t j = 0; j < factors_.points.size(); ++j) {
    if (std::abs(factors_.points[j] - excluded) <= tol) continue;
    if (std::abs(z - cplx(factors_.points[j], 0.0)) == 0.0 &&
        factors_.exponents[j] < 0.0) {
      throw Error(ErrorKind::AtBranchPoint,
                  "evaluation at singular branch point " +
                      fmt(factors_.points[j]));
    }
    sum += factors_.exponents[j] * log_factor(pos, j);
  }
  return sum;
}

double BranchTracker::winding(std::size_t j) const {
  if (!contour_->closed()) {
    throw Error(ErrorKind::BadIndex, "winding requires a closed contour");
  }
  return theta_.back()[j] - theta_.front()[j];
}

cplx psi(const OUModel& model, const BranchTracker& tracker, const PathPos& pos) {
  (void)model;
  const cplx lp = tracker.log_product(pos);
  if (lp.real() == -std::numeric_limits<double>::infinity()) return cplx(0.0, 0.0);
  return std::exp(lp);
}

cplx psi_excluding(const OUModel& model, double b, const BranchTracker& tracker,
                   const PathPos& pos) {
  (void)model;
  const cplx lp = tracker.log_product_excluding(pos, b);
  if (lp.real() == -std::numeric_limits<double>::infinity()) return cplx(0.0, 0.0);
  return std::exp(lp);
}

cplx psi_excluding_at(const OUModel& model, double b) {
  const BranchedFactors f = BranchedFactors::from_model(model);
  const double tol = 1e-12 * f.scale();
  cplx log_sum(0.0, 0.0);
  for (std::size_t j = 0; j < f.points.size(); ++j) {
    const double pj = f.points[j];
    if (std::abs(pj - b) <= tol) continue;
    const double d = b - pj;
    if (d > 0.0) {
      log_sum += f.exponents[j] * cplx(std::log(d), 0.0);
    } else {
      // Factor (b - p) with p > b: approach the cut from the upper side,
      // contributing |b - p|^e * exp(i*pi*e).
      log_sum += f.exponents[j] * cplx(std::log(-d), M_PI);
    }
  }
  return std::exp(log_sum);
}

cplx psi_principal(const OUModel& model, cplx z) {
  const BranchedFactors f = BranchedFactors::from_model(model);
  cplx log_sum(0.0, 0.0);
  for (std::size_t j = 0; j < f.points.size(); ++j) {
    const cplx d = z - f.points[j];
    if (d == cplx(0.0, 0.0)) {
      if (f.exponents[j] < 0.0) {
        throw Error(ErrorKind::AtBranchPoint,
                    "kernel evaluated at a branch point with negative "
                    "exponent");
      }
      return cplx(0.0, 0.0);
    }
    log_sum += f.exponents[j] * std::log(d);
  }
  return std::exp(log_sum);
}

double psi_decay_exponent(const OUModel& model) {
  return BranchedFactors::from_model(model).total_exponent();
}

}  // namespace oujump

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "oujump/model.hpp"

namespace oujump {

using cplx = std::complex<double>;

/// One directed straight piece of an integration path, z(t) = base + dir*t
/// for t in [t0, t1].  t0 = -infinity encodes a ray arriving from infinity,
/// t1 = +infinity a ray leaving toward infinity.  dir is kept exactly as the
/// defining parameterization states it (not normalized); the quadrature uses
/// dz = dir * dt.
struct Piece {
  cplx base{0.0, 0.0};
  cplx dir{1.0, 0.0};
  double t0 = 0.0;
  double t1 = 1.0;

  bool from_infinity() const { return std::isinf(t0); }
  bool to_infinity() const { return std::isinf(t1); }
  cplx at(double t) const { return base + dir * t; }
  /// Finite boundary used as the in-piece branch-tracking reference.
  double ref_t() const { return from_infinity() ? t1 : t0; }
  cplx ref_point() const { return at(ref_t()); }
};

/// A position on a contour: piece index plus the piece's own parameter.
struct PathPos {
  std::size_t piece = 0;
  double t = 0.0;
};

/// Directed integration path: connected pieces traversed in order, plus the
/// anchor point where branch arguments are initialized to their principal
/// values.  The anchor must coincide with one of the finite piece boundaries.
struct Contour {
  std::vector<Piece> pieces;
  cplx anchor{0.0, 0.0};
  std::string label;

  bool closed() const {
    if (pieces.empty()) return false;
    const Piece& f = pieces.front();
    const Piece& l = pieces.back();
    if (f.from_infinity() || l.to_infinity()) return false;
    return std::abs(f.at(f.t0) - l.at(l.t1)) < 1e-12 * (1.0 + std::abs(f.at(f.t0)));
  }
};

/// First-recipe contour attached to mu_i (1-based i in 1..r), used for the
/// eigenfunction parts supported on the positive half-line.  A Zero point
/// gets the single ray {mu_i + (1+i)t, t >= 0}; a Singularity gets the
/// right-opening wedge through a vertex strictly between the largest
/// singular point below mu_i and mu_i itself (midpoint, nudged off any
/// branch point).  All produced paths stay in {Re z >= 0}.
Contour build_gamma_positive(const OUModel& model, int i);

/// Same, with an explicit wedge vertex (Zero case ignores it).  Used by the
/// deformation-invariance studies; the vertex must stay inside the allowed
/// open interval.
Contour build_gamma_positive_at(const OUModel& model, int i, double vertex);

/// Second-recipe contour attached to branch point j, where j is the signed
/// index -s..r over the ordered points (-nu_s, ..., -nu_1, 0, mu_1, .., mu_r)
/// with j = 0 naming the origin.  A Zero gets the ray {p_j + (-1+i)t};
/// a Singularity gets the left-opening wedge with vertex at the midpoint of
/// (p_j, p_{j+1}), with the convention that the point past mu_r is mu_r + 2
/// (vertex mu_r + 1).
Contour build_gamma_level(const OUModel& model, int j);

/// Same, with an explicit wedge vertex (Zero case ignores it).
Contour build_gamma_level_at(const OUModel& model, int j, double vertex);

/// Finite negative-drift contour attached to mu_i, i in 2..r.  A Zero gets
/// the two-segment V from mu_i down to the apex and back up to mu_1; a
/// Singularity gets the closed four-segment diamond around mu_i with right
/// vertex mu_i + a/max(1, -level) and endpoints at mu_1, traversed clockwise
/// (winding -1 around mu_i).  Requires kappa < 0 (else BadScenario).
Contour build_gamma_finite(const OUModel& model, int i, double level, double a);

/// Fixed scaling-limit contours appearing in the asymptotic constants.
enum class ReferenceKind {
  Gamma0,        ///< {(1+i)t : t >= 0}
  GammaMinusA,   ///< right-opening wedge with vertex -a (wraps the origin)
  GammaPlusA,    ///< right-opening wedge with vertex +a (origin outside)
  GammaTildeRay, ///< {(-1+i)t : t >= 0}
  GammaTildeA,   ///< left-opening wedge with vertex +a, counterclockwise
  MinusGamma,    ///< {(-1-i)t : t >= 0}
  MinusGammaA,   ///< left-opening wedge with vertex +a, clockwise
};

struct ReferenceContour {
  ReferenceKind kind = ReferenceKind::Gamma0;
  double a = 1.0;  ///< positive offset where applicable
};

Contour build_reference(const ReferenceContour& ref);

/// Flip the traversal direction of a contour (integrals negate exactly).
Contour reversed(const Contour& c);

/// Mirror a contour across the real axis (piece order preserved); used by
/// the conjugate-symmetry checks.
Contour conjugated(const Contour& c);

}  // namespace oujump

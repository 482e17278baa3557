#include <doctest.h>

#include <cmath>
#include <complex>

#include "oujump/contour.hpp"
#include "oujump/errors.hpp"
#include "oujump/kernel.hpp"
#include "oujump/model.hpp"

using namespace oujump;

namespace {

const double kPi = 3.14159265358979323846;

/// kappa = lambda = 1, p = 2/3, unit rates on both sides:
///   psi(z) = z^{-1} (z-1)^{-2/3} (z+1)^{-1/3}
OUModel reference_model() {
  return validate_model(1.0, 1.0, 2.0 / 3.0, {1.0}, {1.0}, {1.0}, {1.0});
}

}  // namespace

TEST_CASE("kernel values on the real axis right of every branch point") {
  OUModel m = reference_model();
  // Frozen closed forms: psi(2) = (1/2) 3^{-1/3}, psi(3) = (1/3) 2^{-4/3}.
  const cplx p2 = psi_principal(m, cplx(2.0, 0.0));
  CHECK(std::abs(p2 - cplx(0.5 * std::pow(3.0, -1.0 / 3.0))) < 1e-14);
  const cplx p3 = psi_principal(m, cplx(3.0, 0.0));
  CHECK(std::abs(p3 - cplx(std::pow(2.0, -4.0 / 3.0) / 3.0)) < 1e-14);
}

TEST_CASE("kernel with one factor removed, on-axis determinations") {
  OUModel m = reference_model();
  // At the largest branch point: remaining factors all positive reals,
  // value 1^{-1} * 2^{-1/3}.
  const cplx at_mu = psi_excluding_at(m, 1.0);
  CHECK(std::abs(at_mu - cplx(std::pow(2.0, -1.0 / 3.0))) < 1e-14);
  // At the origin: the factor (z-1)^{-2/3} is evaluated on the upper side,
  // contributing e^{-2 pi i / 3}; (z+1)^{-1/3} stays real.
  const cplx at_zero = psi_excluding_at(m, 0.0);
  const cplx want = std::polar(1.0, -2.0 * kPi / 3.0);
  CHECK(std::abs(at_zero - want) < 1e-14);
}

TEST_CASE("principal kernel throws exactly on negative-exponent points") {
  OUModel m = reference_model();
  CHECK_THROWS_AS(psi_principal(m, cplx(1.0, 0.0)), Error);
  CHECK_THROWS_AS(psi_principal(m, cplx(0.0, 0.0)), Error);
  // flipping the drift makes the outer exponents positive: value 0 there,
  // but the origin keeps exponent -1
  OUModel neg = validate_model(-1.0, 1.0, 2.0 / 3.0, {1.0}, {1.0}, {1.0}, {1.0});
  CHECK(psi_principal(neg, cplx(1.0, 0.0)) == cplx(0.0, 0.0));
  CHECK_THROWS_AS(psi_principal(neg, cplx(0.0, 0.0)), Error);
}

TEST_CASE("principal kernel respects conjugate symmetry") {
  OUModel m = reference_model();
  for (cplx z : {cplx(0.3, 0.8), cplx(-2.0, 0.1), cplx(1.5, -2.0)}) {
    const cplx a = psi_principal(m, z);
    const cplx b = psi_principal(m, std::conj(z));
    CHECK(std::abs(b - std::conj(a)) < 1e-13 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("total exponent matches the drift-normalized intensity") {
  // sum of exponents = -1 - lambda/|kappa| regardless of the mixture shape
  OUModel m = reference_model();
  BranchedFactors f = BranchedFactors::from_model(m);
  CHECK(f.total_exponent() == doctest::Approx(-2.0));
  OUModel m2 = validate_model(2.0, 3.0, 0.6, {1.5, -0.5}, {1.0, 2.0}, {0.8, 0.2},
                              {0.5, 3.0});
  BranchedFactors f2 = BranchedFactors::from_model(m2);
  CHECK(f2.total_exponent() == doctest::Approx(-1.0 - 3.0 / 2.0));
  CHECK(psi_decay_exponent(m2) == doctest::Approx(-1.0 - 3.0 / 2.0));
}

TEST_CASE("branch tracking around the reference wedge is continuous") {
  OUModel m = reference_model();
  const Contour wedge = build_gamma_positive(m, 1);
  BranchTracker tracker(wedge, BranchedFactors::from_model(m));
  // On the outgoing upper arm the continued determination stays inside the
  // principal sheet (the lower arm legitimately differs by the monodromy
  // picked up when the path crosses the cut at the vertex).
  const std::size_t last = wedge.pieces.size() - 1;
  const Piece& outgoing = wedge.pieces.back();
  PathPos pos{last, outgoing.t0 + 0.3};
  const cplx z = outgoing.at(pos.t);
  REQUIRE(z.imag() > 0.0);
  const cplx on_contour = psi(m, tracker, pos);
  const cplx principal = psi_principal(m, z);
  CHECK(std::abs(on_contour - principal) < 1e-12 * (1.0 + std::abs(principal)));
}

TEST_CASE("winding numbers of the closed finite path") {
  // inward drift with a negative second coefficient: mu_2 stays singular, so
  // the finite path is the closed diamond, winding -2 pi around its center
  // and 0 around every other branch point
  OUModel m = validate_model(-1.0, 1.0, 1.0, {1.5, -0.5}, {1.0, 2.0});
  const Contour diamond = build_gamma_finite(m, 2, -1.0, 1.0);
  REQUIRE(diamond.closed());
  BranchTracker tracker(diamond, BranchedFactors::from_model(m));
  // factors ordered (0, mu_1, mu_2) -> indices 0, 1, 2
  CHECK(tracker.winding(2) == doctest::Approx(-2.0 * kPi).epsilon(1e-12));
  // the left vertex touches mu_1, so the path subtends exactly the clockwise
  // quarter-turn of that corner rather than a full loop
  CHECK(tracker.winding(1) == doctest::Approx(-0.5 * kPi));
  CHECK(tracker.winding(0) == doctest::Approx(0.0));
}

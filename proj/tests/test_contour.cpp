#include <doctest.h>

#include <cmath>
#include <complex>

#include "oujump/contour.hpp"
#include "oujump/errors.hpp"
#include "oujump/kernel.hpp"
#include "oujump/model.hpp"
#include "oujump/quadrature.hpp"

using namespace oujump;

namespace {

OUModel reference_model() {
  return validate_model(1.0, 1.0, 2.0 / 3.0, {1.0}, {1.0}, {1.0}, {1.0});
}

/// All branch points carry positive exponents at mu (inward drift), so the
/// recipes take their ray branches.
OUModel inward_model() {
  return validate_model(-1.0, 1.0, 1.0, {0.6, 0.4}, {1.0, 2.0});
}

}  // namespace

TEST_CASE("first recipe: singular point gets a right wedge between 0 and mu_1") {
  OUModel m = reference_model();
  const Contour c = build_gamma_positive(m, 1);
  REQUIRE(c.pieces.size() == 2);
  CHECK(c.pieces.front().from_infinity());
  CHECK(c.pieces.back().to_infinity());
  // vertex: real, strictly inside (0, 1)
  const cplx v = c.pieces.front().ref_point();
  CHECK(std::abs(v.imag()) < 1e-14);
  CHECK(v.real() > 0.0);
  CHECK(v.real() < 1.0);
  CHECK(std::abs(c.anchor - v) < 1e-14);
  // arms open to the right at 45 degrees
  const cplx din = c.pieces.front().dir;
  const cplx dout = c.pieces.back().dir;
  CHECK(dout.real() > 0.0);
  CHECK(std::abs(std::abs(dout.imag()) - std::abs(dout.real())) < 1e-12);
  CHECK(din.real() != 0.0);
}

TEST_CASE("first recipe: zero point gets the single upward ray") {
  OUModel m = inward_model();
  for (int i : {1, 2}) {
    const Contour c = build_gamma_positive(m, i);
    REQUIRE(c.pieces.size() == 1);
    const Piece& p = c.pieces.front();
    CHECK(!p.from_infinity());
    CHECK(p.to_infinity());
    CHECK(std::abs(p.at(p.t0) - cplx(m.mu(i), 0.0)) < 1e-14);
    CHECK(p.dir.real() > 0.0);
    CHECK(p.dir.imag() > 0.0);
    CHECK(std::abs(p.dir.imag() - p.dir.real()) < 1e-12);
  }
}

TEST_CASE("second recipe: singular points get left wedges at the midpoints") {
  OUModel m = reference_model();
  // ordered points (-1, 0, 1); expected vertices -0.5, +0.5, and mu_r + 1 = 2
  const double expected[3] = {-0.5, 0.5, 2.0};
  for (int j = -1; j <= 1; ++j) {
    const Contour c = build_gamma_level(m, j);
    REQUIRE(c.pieces.size() == 2);
    const cplx v = c.pieces.front().ref_point();
    CAPTURE(j);
    CHECK(std::abs(v - cplx(expected[j + 1], 0.0)) < 1e-12);
    // arms open to the left
    CHECK(c.pieces.back().to_infinity());
    CHECK(c.pieces.back().dir.real() < 0.0);
  }
}

TEST_CASE("second recipe: zero points get upward-left rays") {
  OUModel m = inward_model();
  // points (0, 1, 2): j = 1, 2 are zeros
  for (int j : {1, 2}) {
    const Contour c = build_gamma_level(m, j);
    REQUIRE(c.pieces.size() == 1);
    const Piece& p = c.pieces.front();
    CHECK(std::abs(p.at(p.t0) - cplx(m.mu(j), 0.0)) < 1e-14);
    CHECK(p.to_infinity());
    CHECK(p.dir.real() < 0.0);
    CHECK(p.dir.imag() > 0.0);
  }
}

TEST_CASE("finite recipe is rejected for outward drift") {
  OUModel m = reference_model();
  CHECK_THROWS_AS(build_gamma_finite(m, 1, -1.0, 1.0), Error);
}

TEST_CASE("finite recipe: V path for a zero point, open with both feet on axis") {
  OUModel m = inward_model();  // all alphas positive -> mu_2 is a zero
  const Contour c = build_gamma_finite(m, 2, -1.0, 1.0);
  CHECK(!c.closed());
  REQUIRE(c.pieces.size() == 2);
  const cplx start = c.pieces.front().at(c.pieces.front().t0);
  const cplx end = c.pieces.back().at(c.pieces.back().t1);
  CHECK(std::abs(start - cplx(2.0, 0.0)) < 1e-12);
  CHECK(std::abs(end - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("finite recipe: diamond closes and scales with the level") {
  // a negative second coefficient keeps mu_2 singular under inward drift
  OUModel m = validate_model(-1.0, 1.0, 1.0, {1.5, -0.5}, {1.0, 2.0});
  const Contour c1 = build_gamma_finite(m, 2, -1.0, 1.0);
  CHECK(c1.closed());
  const Contour c4 = build_gamma_finite(m, 2, -4.0, 1.0);
  CHECK(c4.closed());
  // right vertex mu_2 + a / max(1, -level)
  double right1 = -1e9, right4 = -1e9;
  for (const Piece& p : c1.pieces) {
    right1 = std::max(right1, std::max(p.at(p.t0).real(), p.at(p.t1).real()));
  }
  for (const Piece& p : c4.pieces) {
    right4 = std::max(right4, std::max(p.at(p.t0).real(), p.at(p.t1).real()));
  }
  CHECK(right1 == doctest::Approx(m.mu(2) + 1.0));
  CHECK(right4 == doctest::Approx(m.mu(2) + 0.25));
}

TEST_CASE("upper integrals are invariant under admissible vertex moves") {
  // the integrand is analytic between any two admissible wedges, so the
  // integral cannot depend on where the vertex sits inside (0, mu_1)
  OUModel m = reference_model();
  const double y = 0.7;
  cplx base;
  bool first = true;
  for (double v : {0.25, 0.5, 0.75}) {
    const Contour c = build_gamma_positive_at(m, 1, v);
    const cplx val = integrate(m, c, Weight::exponential(y)).unscaled();
    if (first) {
      base = val;
      first = false;
    } else {
      CAPTURE(v);
      CHECK(std::abs(val - base) < 1e-7 * (1.0 + std::abs(base)));
    }
  }
  CHECK(std::abs(base) > 1e-6);  // the invariance is not vacuous
}

TEST_CASE("window integrals are invariant under admissible vertex moves") {
  OUModel m = reference_model();
  const double level = -1.0;
  cplx base;
  bool first = true;
  for (double v : {0.3, 0.5, 0.7}) {
    const Contour c = build_gamma_level_at(m, 0, v);
    // the weight of the coefficient systems: e^{-level z} / (mu_1 - z)
    const cplx val =
        integrate(m, c, Weight::exp_pole(level, m.mu(1), true)).unscaled();
    if (first) {
      base = val;
      first = false;
    } else {
      CAPTURE(v);
      CHECK(std::abs(val - base) < 1e-7 * (1.0 + std::abs(base)));
    }
  }
  CHECK(std::abs(base) > 1e-6);
}

TEST_CASE("vertex relocation outside the admissible interval is rejected") {
  OUModel m = reference_model();
  CHECK_THROWS_AS(build_gamma_positive_at(m, 1, 1.5), Error);
  CHECK_THROWS_AS(build_gamma_positive_at(m, 1, -0.25), Error);
}

TEST_CASE("integrability conditions hold on the default contours") {
  OUModel m = reference_model();
  const double level = -1.0;
  ConditionReport up = check_conditions(m, build_gamma_positive(m, 1), level,
                                        ContourRole::UpperPositive);
  CHECK(up.all_pass);
  ConditionReport win = check_conditions(m, build_gamma_level(m, 0), level,
                                         ContourRole::LevelWindow);
  CHECK(win.all_pass);
}

TEST_CASE("conjugation mirrors the geometry") {
  OUModel m = reference_model();
  const Contour c = build_gamma_positive(m, 1);
  const Contour cc = conjugated(c);
  REQUIRE(cc.pieces.size() == c.pieces.size());
  for (std::size_t i = 0; i < c.pieces.size(); ++i) {
    const double t = std::isinf(c.pieces[i].t0) ? c.pieces[i].t1
                                                : c.pieces[i].t0;
    CHECK(std::abs(cc.pieces[i].at(t) - std::conj(c.pieces[i].at(t))) < 1e-14);
  }
}

#include <cmath>
#include <complex>

#include "doctest.h"
#include "oujump/errors.hpp"
#include "oujump/eigensystem.hpp"
#include "oujump/model.hpp"
#include "oujump/ruin.hpp"

using namespace oujump;

namespace {

OUModel reference_model() {
  return validate_model(1.0, 1.0, 2.0 / 3.0, {1.0}, {1.0}, {1.0}, {1.0});
}

}  // namespace

TEST_CASE("ruin probability: split identity, bounds, monotonicity in x") {
  OUModel m = reference_model();
  double prev = 1.0;
  for (double x : {0.2, 0.5, 1.0, 2.0}) {
    RuinResult rr = ruin_probability(m, x, -1.0);
    CHECK(rr.kind == RuinKind::RuinProb);
    CHECK(rr.value > 0.0);
    CHECK(rr.value < 1.0);
    CHECK(rr.value < prev);  // farther start, lower crossing probability
    prev = rr.value;
    REQUIRE(rr.continuous_part.has_value());
    // ruin = jump part + continuous part; re-derive the jump part as the
    // zeta = 0 transform value.
    Query q{x, -1.0, 0.0};
    RuinResult lap = laplace_undershoot(m, q);
    CHECK(rr.value == doctest::Approx(lap.value + *rr.continuous_part)
                          .epsilon(1e-10));
    CHECK(rr.imag_residual < 1e-10);
  }
}

TEST_CASE("ruin probability: regression anchors for the two-region scenario") {
  OUModel m = reference_model();
  struct Anchor {
    double x, total, jump, cont;
  };
  // Cross-checked against a 10^6-path Monte Carlo oracle in the acceptance
  // suite; frozen here at quadrature accuracy.
  const Anchor anchors[] = {
      {0.2, 0.5032949519, 0.3058348396, 0.1974601123},
      {0.5, 0.3335788603, 0.2027042728, 0.1308745875},
      {1.0, 0.1798611766, 0.1092953821, 0.0705657944},
      {2.0, 0.0570843598, 0.0346881803, 0.0223961795},
  };
  for (const Anchor& a : anchors) {
    RuinResult rr = ruin_probability(m, a.x, -1.0);
    CHECK(rr.value == doctest::Approx(a.total).epsilon(1e-7));
    REQUIRE(rr.continuous_part.has_value());
    CHECK(*rr.continuous_part == doctest::Approx(a.cont).epsilon(1e-7));
    Query q{a.x, -1.0, 0.0};
    CHECK(laplace_undershoot(m, q).value ==
          doctest::Approx(a.jump).epsilon(1e-7));
  }
}

TEST_CASE("laplace transform: monotone in zeta, exact exponential factor for r=1") {
  OUModel m = reference_model();
  Query q0{0.5, -1.0, 0.0};
  const double pj = laplace_undershoot(m, q0).value;  // P(A_j)
  double prev = pj + 1e-12;
  for (double zeta : {0.25, 0.5, 1.0, 2.0}) {
    Query q{0.5, -1.0, zeta};
    RuinResult rr = laplace_undershoot(m, q);
    CHECK(rr.value < prev);
    prev = rr.value;
    // One exponential phase below the level: the undershoot given a jump
    // crossing is memoryless, so the transform factors exactly.
    CHECK(rr.value ==
          doctest::Approx(pj * 1.0 / (1.0 + zeta)).epsilon(1e-10));
    // The continuous companion does not involve the transform argument.
    REQUIRE(rr.continuous_part.has_value());
    CHECK(*rr.continuous_part == doctest::Approx(0.1308745875).epsilon(1e-7));
  }
}

TEST_CASE("scenario dispatch: level above start of drift, recurrent, unsupported") {
  OUModel m = reference_model();

  SUBCASE("positive level with positive drift: jump-only crossing") {
    Query q{2.0, 0.5, 0.7};
    RuinResult rr = laplace_undershoot(m, q);
    CHECK(rr.kind == RuinKind::LaplaceJump);
    REQUIRE(rr.continuous_part.has_value());
    CHECK(*rr.continuous_part == 0.0);  // flow points away from the level
    CHECK(rr.value == doctest::Approx(0.0448117569).epsilon(1e-7));
    CHECK(ruin_probability(m, 2.0, 0.5).value ==
          doctest::Approx(0.0761799867).epsilon(1e-7));
  }

  SUBCASE("query validation") {
    CHECK_THROWS_AS(laplace_undershoot(m, Query{-2.0, -1.0, 0.0}), Error);
    CHECK_THROWS_AS(laplace_undershoot(m, Query{1.0, 0.0, 0.0}), Error);
    CHECK_THROWS_AS(laplace_undershoot(m, Query{1.0, -1.0, -0.5}), Error);
  }

  SUBCASE("negative drift: certain ruin, unsupported transform above zero") {
    OUModel rec = validate_model(-0.7, 1.2, 0.55, {1.0}, {1.4}, {1.0}, {0.9});
    RuinResult rr = ruin_probability(rec, 2.0, -0.6);
    CHECK(rr.value == 1.0);
    CHECK(rr.kind == RuinKind::RuinProb);
    CHECK_THROWS_AS(laplace_undershoot(rec, Query{2.0, 0.6, 0.3}), Error);
  }
}

TEST_CASE("recurrent case, single down phase: transform is exactly mu/(mu+zeta)") {
  OUModel m = validate_model(-1.0, 1.0, 0.7, {1.0}, {2.0}, {1.0}, {1.0});
  for (double zeta : {0.0, 0.5, 1.0, 3.0}) {
    for (double x : {-0.5, 0.7, 2.0}) {
      Query q{x, -0.8, zeta};
      RuinResult rr = laplace_undershoot(m, q);
      CHECK(std::abs(rr.value - 2.0 / (2.0 + zeta)) < 1e-12);
    }
  }
}

TEST_CASE("recurrent case, two down phases: transform approaches mu_1/(mu_1+zeta)") {
  OUModel m =
      validate_model(-1.0, 1.0, 0.8, {1.5, -0.5}, {1.0, 2.0}, {1.0}, {1.5});
  const double zeta = 0.6;
  const double lim = 1.0 / 1.6;
  // Start-point independence: the crossing happens from quasi-stationarity.
  const double v15 = laplace_undershoot(m, Query{1.0, -15.0, zeta}).value;
  CHECK(laplace_undershoot(m, Query{-2.0, -15.0, zeta}).value ==
        doctest::Approx(v15).epsilon(1e-10));
  CHECK(laplace_undershoot(m, Query{3.0, -15.0, zeta}).value ==
        doctest::Approx(v15).epsilon(1e-10));
  // Monotone approach to the deep-level limit.
  double prev_gap = 1.0;
  for (double lvl : {-5.0, -15.0, -30.0}) {
    double v = laplace_undershoot(m, Query{1.0, lvl, zeta}).value;
    double gap = std::abs(v - lim);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 2e-3);  // at level -30
  CHECK(undershoot_limit(m, zeta).constant.real() ==
        doctest::Approx(lim).epsilon(1e-12));
}

TEST_CASE("undershoot limit constant: fields and values") {
  OUModel m =
      validate_model(-1.0, 1.0, 0.8, {1.5, -0.5}, {1.0, 2.0}, {1.0}, {1.5});
  AsymptoticResult ar = undershoot_limit(m, 1.0);
  CHECK(ar.regime == Regime::UndershootLimit);
  CHECK(ar.constant.real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ar.constant.imag() == 0.0);
  CHECK(ar.normalizer(3.7) == 1.0);
  OUModel m2 = validate_model(-1.0, 1.0, 0.7, {1.0}, {2.0}, {1.0}, {1.0});
  CHECK(undershoot_limit(m2, 1.0).constant.real() ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("far-start asymptote: normalizer shape and shrinking relative error") {
  OUModel m = reference_model();
  AsymptoticResult ak = asymptotic_K(m, -1.0);
  CHECK(ak.regime == Regime::XtoInf);
  // Slowest down rate drives the decay; the power is the kernel exponent at
  // that rate minus one.
  CHECK(ak.exp_rate == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ak.power == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(ak.constant.real() == doctest::Approx(0.60770840).epsilon(1e-6));
  CHECK(std::abs(ak.constant.imag()) < 1e-8);
  CHECK_FALSE(ak.ingredients.empty());

  double prev_err = 1.0;
  for (double x : {5.0, 8.0}) {
    RuinResult rr = ruin_probability(m, x, -1.0);
    double ratio = rr.value / ak.normalizer(x);
    double err = std::abs(ratio - ak.constant.real()) / ak.constant.real();
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.05);  // 4.2% at x = 8
}

TEST_CASE("deep-level asymptote: limit value matches a deep finite-level solve") {
  OUModel m = reference_model();
  AsymptoticResult al = limit_ruin_level(m, 0.5);
  CHECK(al.regime == Regime::LtoMinusInf);
  CHECK(al.constant.real() == doctest::Approx(0.3217388137).epsilon(1e-7));
  CHECK(std::abs(al.constant.imag()) < 1e-9);
  RuinResult deep = ruin_probability(m, 0.5, -25.0);
  CHECK(al.constant.real() == doctest::Approx(deep.value).epsilon(1e-8));
  // Decreasing gap along -5, -12.
  double g5 = std::abs(ruin_probability(m, 0.5, -5.0).value - al.constant.real());
  double g12 =
      std::abs(ruin_probability(m, 0.5, -12.0).value - al.constant.real());
  CHECK(g12 < g5);
  CHECK(g12 < 1e-6);
}

TEST_CASE("deep-level diagnostics stabilize") {
  OUModel m = reference_model();
  LevelDiagnostics d8 = level_asymptote_diagnostics(m, -8.0);
  LevelDiagnostics d16 = level_asymptote_diagnostics(m, -16.0);
  CHECK(std::abs(d8.b0_times_f2 - cplx(-1.0, 0.0)) < 1e-4);
  CHECK(std::abs(d16.b0_times_f2 - cplx(-1.0, 0.0)) < 1e-7);
  CHECK(std::abs(d16.det_ratio - cplx(1.0, 0.0)) <
        std::abs(d8.det_ratio - cplx(1.0, 0.0)) + 1e-12);
  CHECK(std::abs(d16.det_ratio - cplx(1.0, 0.0)) < 1e-7);
}

TEST_CASE("level-weighted moment constants approach their deep-level form") {
  OUModel m = reference_model();
  ContourSet cs = default_contours(m);
  const int s = m.jumps.s();
  for (int i : {-1, 0, 1}) {
    AsymptoticResult an = asymptotic_N3(m, i, 1);
    CHECK(an.regime == Regime::LtoMinusInf);
    double prev_err = 1.0;
    for (double lvl : {-10.0, -20.0}) {
      MomentConstants mc = compute_moments(m, cs, lvl, MomentSet::LevelOnly);
      ScaledComplex n3 = mc.N3[static_cast<size_t>(i + s)][0];
      cplx fin = n3.value * std::exp(n3.log_scale);
      cplx pred = an.constant * an.normalizer(lvl);
      double err = std::abs(fin - pred) / std::abs(pred);
      CHECK(err < prev_err);
      prev_err = err;
    }
    // The window at the slowest down rate converges fastest (its competing
    // terms die exponentially); the outer windows only like 1/|level|.
    CHECK(prev_err < (i == 0 ? 1e-9 : 0.06));
  }
  CHECK_THROWS_AS(asymptotic_N3(m, 2, 1), Error);
  CHECK_THROWS_AS(asymptotic_N3(m, 0, 2), Error);
}

TEST_CASE("recurrent split: complementary parts and flow-direction degeneracy") {
  OUModel m = validate_model(-0.7, 1.2, 0.55, {1.0}, {1.4}, {1.0}, {0.9});

  auto [rc, rj] = recurrent_split(m, 2.0, 0.6);
  CHECK(rc.kind == RuinKind::SplitCont);
  CHECK(rj.kind == RuinKind::SplitJump);
  CHECK(rc.value + rj.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rc.value == doctest::Approx(0.52425107).epsilon(1e-6));
  CHECK(rj.value == doctest::Approx(0.47574893).epsilon(1e-6));
  CHECK(rc.value > 0.0);
  CHECK(rj.value > 0.0);

  // Below-zero level with negative drift: flow points away, so the crossing
  // must jump.
  auto [rc2, rj2] = recurrent_split(m, 2.0, -0.6);
  CHECK(rc2.value == 0.0);
  CHECK(rj2.value == 1.0);

  // Positive drift has no recurrent split.
  CHECK_THROWS_AS(recurrent_split(reference_model(), 2.0, 0.6), Error);
}

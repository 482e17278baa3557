#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "oujump/model.hpp"
#include "oujump/ruin.hpp"
#include "oujump/simulate.hpp"

using namespace oujump;

namespace {

OUModel reference_model() {
  return validate_model(1.0, 1.0, 2.0 / 3.0, {1.0}, {1.0}, {1.0}, {1.0});
}

}  // namespace

TEST_CASE("path rng: reproducible per-index substreams") {
  Rng r1 = path_rng(33, 17);
  Rng r2 = path_rng(33, 17);
  const std::uint64_t a1 = r1();
  const std::uint64_t a2 = r2();
  CHECK(a1 == a2);
  Rng r3 = path_rng(33, 18);
  Rng r4 = path_rng(34, 17);
  CHECK(r3() != a1);
  CHECK(r4() != a1);
}

TEST_CASE("jump sampler: sign frequency and magnitude moments") {
  OUModel m = reference_model();
  Rng rng = path_rng(42, 0);
  const int n = 20000;
  int neg = 0;
  double abs_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = sample_jump(m, rng);
    CHECK(u != 0.0);
    if (u < 0.0) ++neg;
    abs_sum += std::abs(u);
  }
  // Downward probability 2/3; binomial SE ~ 0.0033.
  CHECK(std::abs(double(neg) / n - 2.0 / 3.0) < 4.0 * 0.0034);
  // Both magnitude laws are unit exponentials here.
  CHECK(std::abs(abs_sum / n - 1.0) < 4.0 * 0.0071);
}

TEST_CASE("jump sampler: non-convex mixture via distribution inversion") {
  // Signed weights rule out composition sampling; the density stays positive.
  OUModel m = validate_model(1.0, 1.0, 1.0, {1.5, -0.5}, {1.0, 2.0}, {}, {});
  Rng rng = path_rng(7, 3);
  const int n = 20000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = sample_jump(m, rng);
    CHECK(u < 0.0);  // p = 1: every jump is downward
    sum += -u;
  }
  // E|U| = 1.5/1 - 0.5/2 = 1.25, sd ~ 1.09, SE ~ 0.0077.
  CHECK(std::abs(sum / n - 1.25) < 4.0 * 0.0077);
}

TEST_CASE("first passage paths: determinism and outcome fields") {
  OUModel m = reference_model();
  PathConfig pc;
  pc.n_paths = 500;
  pc.seed = 33;

  Estimate a = estimate_ruin(m, 1.0, -1.0, pc);
  Estimate b = estimate_ruin(m, 1.0, -1.0, pc);
  CHECK(a.mean == b.mean);
  CHECK(a.std_err == b.std_err);
  CHECK(a.n == 500);

  Rng r1 = path_rng(33, 4);
  Rng r2 = path_rng(33, 4);
  FirstPassageResult fa = simulate_first_passage(m, 1.0, -1.0, pc, r1);
  FirstPassageResult fb = simulate_first_passage(m, 1.0, -1.0, pc, r2);
  CHECK(fa.outcome == fb.outcome);
  CHECK(fa.tau == fb.tau);
  CHECK(fa.undershoot == fb.undershoot);
  if (fa.outcome != Outcome::Survived) CHECK(fa.tau > 0.0);
  if (fa.outcome == Outcome::ContinuousCross) CHECK(fa.undershoot == 0.0);
}

TEST_CASE("crossing fraction matches the analytic value within Monte Carlo error") {
  OUModel m = reference_model();
  PathConfig pc;
  pc.n_paths = 20000;
  pc.seed = 11;
  Estimate e = estimate_ruin(m, 1.0, -1.0, pc);
  RuinResult an = ruin_probability(m, 1.0, -1.0);
  CHECK(std::abs(e.mean - an.value) < 4.0 * e.std_err + e.bias_bound);
  CHECK(e.std_err > 0.0);
  CHECK(e.std_err < 0.005);
  CHECK(e.bias_bound < 1e-8);  // barrier at x + 30/mu_1 leaves no real mass
  CHECK_FALSE(e.truncation_note.empty());
}

TEST_CASE("transform and split estimates match the analytic values") {
  OUModel m = reference_model();
  PathConfig pc;
  pc.n_paths = 20000;
  pc.seed = 12;
  LaplaceSplit ls = estimate_laplace(m, 1.0, -1.0, 1.0, pc);

  Query q{1.0, -1.0, 1.0};
  const double an_jump = laplace_undershoot(m, q).value;
  RuinResult rr = ruin_probability(m, 1.0, -1.0);
  REQUIRE(rr.continuous_part.has_value());
  const double an_cont = *rr.continuous_part;

  CHECK(std::abs(ls.jump.mean - an_jump) <
        4.0 * ls.jump.std_err + ls.jump.bias_bound);
  CHECK(std::abs(ls.cont.mean - an_cont) <
        4.0 * ls.cont.std_err + ls.cont.bias_bound);
  CHECK(ls.jump.n == 20000);
}

TEST_CASE("inward drift: every path crosses and undershoots are memoryless") {
  OUModel m = validate_model(-1.0, 1.0, 0.7, {1.0}, {2.0}, {1.0}, {1.0});
  PathConfig pc;
  pc.n_paths = 2000;
  pc.seed = 5;
  Estimate e = estimate_ruin(m, 0.5, -1.5, pc);
  CHECK(e.mean == doctest::Approx(1.0).epsilon(1e-12));

  // Undershoot of a jump crossing carries the single down phase: mean 1/2.
  double sum = 0.0;
  int cnt = 0;
  for (int i = 0; i < 3000; ++i) {
    Rng rng = path_rng(9, static_cast<std::uint64_t>(i));
    FirstPassageResult fp = simulate_first_passage(m, 0.5, -1.5, pc, rng);
    REQUIRE(fp.outcome == Outcome::JumpCross);  // flow points away from level
    CHECK(fp.undershoot > 0.0);
    sum += fp.undershoot;
    ++cnt;
  }
  CHECK(std::abs(sum / cnt - 0.5) < 4.0 * 0.0092);
}

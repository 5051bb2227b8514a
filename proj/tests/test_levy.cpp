#include <cmath>

#include "doctest.h"
#include "melt/dist.hpp"
#include "melt/errors.hpp"
#include "melt/levy.hpp"
#include "melt/mellin.hpp"

using namespace melt;

namespace {
LevySpec cp_example() {
  LevySpec s;
  s.d = 0.05;
  s.sigma2 = 0.4;
  s.jumps.kind = JumpKind::compound_poisson;
  s.jumps.rate = 1.0;
  s.jumps.jump_mean = 1.0;
  return s;
}

LevySpec atoms(std::vector<std::pair<double, double>> a) {
  LevySpec s;
  s.jumps.kind = JumpKind::finite_atoms;
  s.jumps.atoms = std::move(a);
  return s;
}
}  // namespace

TEST_CASE("cumulant of a single unit atom") {
  // one jump of size 1/2 at rate 1, no drift or diffusion
  const LevySpec s = atoms({{1.0, 0.5}});
  CHECK(levy_exponent(s, 1.0) ==
        doctest::Approx(std::exp(-0.5) - 1.0 + 0.5).epsilon(1e-14));
  // compensator only applies to jumps <= 1
  const LevySpec big = atoms({{1.0, 2.0}});
  CHECK(levy_exponent(big, 1.0) ==
        doctest::Approx(std::exp(-2.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("closed second differences") {
  const LevySpec a2 = atoms({{2.0, 1.0}});
  const double em1 = std::exp(-1.0);
  CHECK(levy_delta(a2, 1.0, 1.0) ==
        doctest::Approx(2.0 * em1 * (1.0 - em1) * (1.0 - em1)).epsilon(1e-13));

  // unit-rate, unit-mean exponential jumps: 2 / ((t+1)(t+2)(t+3))
  LevySpec cp;
  cp.jumps.kind = JumpKind::compound_poisson;
  cp.jumps.rate = 1.0;
  cp.jumps.jump_mean = 1.0;
  CHECK(levy_delta(cp, 1.0, 1.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK(levy_delta(cp, 50.0, 1.0) ==
        doctest::Approx(2.0 / (51.0 * 52.0 * 53.0)).epsilon(1e-12));

  // the diffusion part contributes sigma2 * s exactly
  const LevySpec ex = cp_example();
  CHECK(levy_delta(ex, 50.0, 1.0) ==
        doctest::Approx(0.4 + 2.0 / (51.0 * 52.0 * 53.0)).epsilon(1e-12));
}

TEST_CASE("cumulant certificates on the example model") {
  const LevySpec ex = cp_example();
  CHECK(check_levy_delta(ex, {0.5, 1.0, 5.0, 20.0, 50.0}, {0.5, 1.0, 2.0},
                         1e-10)
            .passed);
  CHECK(check_levy_gprime_concave(ex, make_grid(0.0, 5.0, 0.25), 1e-8).passed);
  // the gap to the diffusion floor closes like 2/t^3: 1.4e-5 at t = 50
  CHECK(check_levy_ratio_limit(ex, 1.0, {1.0, 2.0, 5.0, 10.0, 25.0, 50.0},
                               1e-4)
            .passed);
  CHECK_FALSE(check_levy_ratio_limit(ex, 1.0, {1.0, 2.0, 5.0}, 1e-6).passed);
  CHECK(check_levy_rate_symmetry(ex, 50.0, 0.7, 1.3, 1e-6).passed);
}

TEST_CASE("strip endpoint follows the jump decay") {
  LevySpec cp;
  cp.jumps.kind = JumpKind::compound_poisson;
  cp.jumps.rate = 2.0;
  cp.jumps.jump_mean = 0.5;  // decay beta = 2
  CHECK(levy_lambda_lower(cp) == doctest::Approx(-2.0));
  CHECK(std::isinf(levy_lambda_lower(atoms({{1.0, 1.0}}))));
}

TEST_CASE("pure diffusion prices are log-normal") {
  LevySpec bm;
  bm.sigma2 = 1.0;
  const auto x = make_exp_levy(bm);
  CHECK(mellin_distance(*x, *make_log_normal(0.0, 1.0),
                        make_grid(0.5, 4.0, 0.5)) < 1e-10);
  CHECK(survival(*x, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("survival route agrees with the closed cumulant") {
  const auto x = make_exp_levy(cp_example());
  const double lam = 1.5;
  const double closed = std::exp(levy_exponent(cp_example(), lam));
  CHECK(mellin_via_survival(*x, lam).value ==
        doctest::Approx(closed).epsilon(1e-6));
  CHECK(log_mellin(*x, lam).log_value ==
        doctest::Approx(levy_exponent(cp_example(), lam)).epsilon(1e-13));
}

TEST_CASE("density availability tracks the diffusion part") {
  CHECK(levy_log_price_has_density(cp_example()));
  LevySpec pure_cp;
  pure_cp.jumps.kind = JumpKind::compound_poisson;
  pure_cp.jumps.rate = 1.0;
  pure_cp.jumps.jump_mean = 1.0;
  CHECK_FALSE(levy_log_price_has_density(pure_cp));
  CHECK_FALSE(has_density(*make_exp_levy(pure_cp)));

  // with diffusion the price density integrates against the survival identity
  const auto x = make_exp_levy(cp_example());
  CHECK(mellin_via_density(*x, 1.0).value ==
        doctest::Approx(std::exp(levy_exponent(cp_example(), 1.0)))
            .epsilon(1e-6));
}

TEST_CASE("spec validation") {
  LevySpec bad;
  bad.sigma2 = -1.0;
  CHECK_THROWS_AS(validate(bad), InvalidSpec);
  LevySpec badrate;
  badrate.jumps.kind = JumpKind::compound_poisson;
  badrate.jumps.rate = -2.0;
  badrate.jumps.jump_mean = 1.0;
  CHECK_THROWS_AS(validate(badrate), InvalidSpec);
  LevySpec badatom;
  badatom.jumps.kind = JumpKind::finite_atoms;
  badatom.jumps.atoms = {{0.5, -1.0}};
  CHECK_THROWS_AS(validate(badatom), InvalidSpec);
}

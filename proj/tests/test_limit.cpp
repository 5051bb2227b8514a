#include <cmath>

#include "doctest.h"
#include "melt/dist.hpp"
#include "melt/errors.hpp"
#include "melt/limit.hpp"
#include "melt/mellin.hpp"
#include "melt/special.hpp"

using namespace melt;

TEST_CASE("normalization curve against closed ratios") {
  const auto exp_curve = rho_curve(make_exponential(1.0), 1.0, {1.0, 2.0, 3.0});
  REQUIRE(exp_curve.rho.size() == 3);
  CHECK(exp_curve.rho[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(exp_curve.rho[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(exp_curve.rho[2] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(exp_curve.nondecreasing);

  const auto ln_curve = rho_curve(make_log_normal(0.0, 1.0), 2.0, {2.0});
  CHECK(ln_curve.rho[0] == doctest::Approx(std::exp(2.5) / 2.0).epsilon(1e-12));

  const auto u_curve = rho_curve(make_uniform(0.0, 1.0), 1.0, {4.0});
  CHECK(u_curve.rho[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("curvature estimates") {
  for (double t : {0.5, 2.0, 20.0})
    for (double s : {0.5, 1.0, 2.0})
      CHECK(estimate_c(make_log_normal(0.0, 0.7), t, s).value ==
            doctest::Approx(0.7).epsilon(1e-12));
  CHECK(estimate_c(make_exponential(1.0), 10.0, 1.0).value ==
        doctest::Approx(std::log(12.0 / 11.0)).epsilon(1e-12));
}

TEST_CASE("limit pair moments") {
  const LimitLaw law = limit_law(2.0, 0.5);
  CHECK(std::exp(log_moment(law.x_inf, 1.0)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::exp(log_moment(law.x_inf, 2.0)) ==
        doctest::Approx(4.0 * std::exp(0.5)).epsilon(1e-12));
  // the unit-mean exponential factor: E[Z] = alpha, E[Z^2] = 2 E[X^2]
  CHECK(std::exp(log_moment(law.z_inf, 1.0)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::exp(log_moment(law.z_inf, 2.0)) ==
        doctest::Approx(8.0 * std::exp(0.5)).epsilon(1e-12));

  const LimitLaw degenerate = limit_law(3.0, 0.0);
  double v = 0.0;
  CHECK(is_point_mass(*degenerate.x_inf, &v));
  CHECK(v == doctest::Approx(3.0));

  CHECK_THROWS_AS(limit_law(-1.0, 0.5), InvalidSpec);
  CHECK_THROWS_AS(limit_law(1.0, -0.1), InvalidSpec);
}

TEST_CASE("normalized bias family of a log-normal is already the limit") {
  const auto d = make_log_normal(0.3, 1.2);
  const LimitLaw law = limit_law(1.5, 1.2);
  const auto grid = make_grid(0.5, 3.0, 0.5);
  for (double t : {1.0, 7.5}) {
    const auto xt = normalized_family(d, 1.5, t, FamilyKind::bias);
    CHECK(mellin_distance(*xt, *law.x_inf, grid) < 1e-12);
  }
  // the excess family carries the beta factor: approaches z_inf as t grows
  const auto z5 = normalized_family(d, 1.5, 5.0, FamilyKind::excess);
  const auto z40 = normalized_family(d, 1.5, 40.0, FamilyKind::excess);
  const double gap5 = mellin_distance(*z5, *law.z_inf, grid);
  const double gap40 = mellin_distance(*z40, *law.z_inf, grid);
  CHECK(gap40 < gap5);
  CHECK(gap40 < 0.2);
  CHECK(gap5 > 0.01);
}

TEST_CASE("two-sample KS statistic") {
  CHECK(ks_statistic({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == doctest::Approx(0.0));
  CHECK(ks_statistic({1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}) == doctest::Approx(1.0));
  CHECK(ks_statistic({1.0, 3.0}, {2.0, 4.0}) == doctest::Approx(0.5));
}

TEST_CASE("limit identities hold and tampered curvature fails") {
  const auto grid = make_grid(0.25, 4.0, 0.25);
  for (double s : {0.0, 1.0, 2.5})
    CHECK(check_fixed_point(limit_law(1.5, 0.8), s, grid, 1e-12).passed);

  LimitLaw law = limit_law(1.0, 0.5);
  law.c = 0.6;
  CHECK_FALSE(check_fixed_point(law, 1.0, grid, 1e-12).passed);
}

TEST_CASE("convergence report on the self-similar family") {
  const auto rep = convergence_report(make_log_normal(0.0, 1.0), 1.0,
                                      {5.0, 10.0, 20.0, 40.0},
                                      make_grid(0.5, 3.0, 0.5), 100000, 77, 1.0);
  CHECK(rep.verdict.passed);
  CHECK(rep.fitted_c == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.c_consistent);
  REQUIRE(rep.ks.size() == 4);
  CHECK(rep.ks.back() < 0.01);
  CHECK(rep.ks.front() >= rep.ks.back());
  REQUIRE(rep.mellin_rel_err.size() == 4);
  for (const auto& row : rep.mellin_rel_err)
    for (double e : row) CHECK(e < 1e-10);
  REQUIRE(rep.x_ladder.size() == 5);
  REQUIRE(rep.ui_tail.size() == 4);
  for (const auto& row : rep.ui_tail) {
    REQUIRE(row.size() == 5);
    // tails must be finite and decreasing along the ladder
    for (std::size_t i = 1; i < row.size(); ++i) CHECK(row[i] <= row[i - 1] + 1e-12);
  }

  // the same family read off far from the limit must fail the verdict
  const auto early = convergence_report(make_log_normal(0.0, 1.0), 1.0,
                                        {1.0, 2.0}, make_grid(0.5, 2.0, 0.5),
                                        4000, 77, 1.0);
  CHECK_FALSE(early.verdict.passed);
}

TEST_CASE("report input validation") {
  CHECK_THROWS_AS(convergence_report(make_log_normal(0.0, 1.0), 1.0, {},
                                     {1.0}, 100, 1, 1.0),
                  InvalidSpec);
  CHECK_THROWS_AS(convergence_report(make_log_normal(0.0, 1.0), 1.0,
                                     {2.0, 1.0}, {1.0}, 100, 1, 1.0),
                  InvalidSpec);
}

TEST_CASE("moment indeterminacy demonstration") {
  const auto r = indeterminacy_demo(0.0, 1.0, 0.5, 6, 0.5);
  REQUIRE(r.orders.size() == 7);
  for (double g : r.rel_gaps) CHECK(g < 1e-6);
  const double closed =
      std::exp(0.125) * 0.5 * std::exp(-PI * PI / 2.0);
  CHECK(r.closed_probe_gap == doctest::Approx(closed).epsilon(1e-12));
  CHECK(r.probe_gap == doctest::Approx(closed).epsilon(1e-4));
  CHECK(r.probe_gap > 1e-3);
}

#include <cmath>

#include "doctest.h"
#include "melt/dist.hpp"
#include "melt/mellin.hpp"
#include "melt/size_bias.hpp"
#include "melt/special.hpp"
#include "melt/tmono.hpp"

using namespace melt;

TEST_CASE("beta factor against a point mass is the factor itself") {
  const auto d = beta_mix(make_point_mass(1.0), 2.5);
  CHECK(survival(*d, 0.3) ==
        doctest::Approx(std::pow(0.7, 2.5)).epsilon(1e-12));
  // order 0 leaves the law alone
  const auto y = make_gamma(2.0);
  CHECK(beta_mix(y, 0.0).get() == y.get());
}

TEST_CASE("certificates accept what they should") {
  CHECK(check_k_monotone(beta_mix(make_point_mass(1.0), 4.0), 4, 1.0 / 256,
                         1.0)
            .passed);
  CHECK(check_k_monotone(beta_mix(make_gamma(2.0), 2.0), 2, 1.0 / 64, 10.0)
            .passed);
  CHECK(check_k_monotone(make_exponential(1.0), 3, 0.0, 4.0).passed);
}

TEST_CASE("certificates reject what they should") {
  // uniform density is 1-monotone but has a terminal jump, so convexity fails
  const auto u = make_uniform(0.0, 1.0);
  CHECK(check_k_monotone(u, 1, 1.0 / 256, 1.0).passed);
  CHECK_FALSE(check_k_monotone(u, 2, 1.0 / 256, 1.0).passed);
  // density 2x increases: not even 1-monotone
  const auto rising = size_bias(u, 1.0);
  CHECK_FALSE(check_k_monotone(rising, 1, 1.0 / 256, 1.0 - 1.0 / 256).passed);
}

TEST_CASE("pushing a beta factor through a lower order") {
  CHECK(check_downward_closure(make_gamma(2.0), 1.0, 2.5,
                               make_grid(0.5, 4.0, 0.5), 1e-8)
            .passed);
}

TEST_CASE("truncated kernels approach the exponential") {
  CHECK(truncated_exp_kernel(1.0, 1.0) == 0.0);
  CHECK(std::abs(truncated_exp_kernel(2.5, 100.0) - std::exp(-2.5)) <
        std::exp(1.0) / 200.0);
  CHECK(check_cm_limit({1.0, 2.0, 5.0, 10.0, 20.0, 100.0},
                       make_grid(0.0, 10.0, 0.1))
            .passed);
}

TEST_CASE("dividing out the beta factor recovers the mixing transform") {
  const auto grid = make_grid(0.5, 4.0, 0.5);

  // mix then recover
  const auto mixed = beta_mix(make_gamma(2.0), 1.5);
  const RecoveredMixing r = recover_mixing_mellin(mixed, 1.5, grid, 1e-9);
  CHECK(r.validity.passed);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(r.profile.log_values[i] ==
          doctest::Approx(log_gamma(2.0 + grid[i]) - log_gamma(2.0))
              .epsilon(1e-7));

  // the beta factor alone mixes the point mass at 1
  const RecoveredMixing unit =
      recover_mixing_mellin(make_beta_t(3.0), 3.0, grid, 1e-9);
  for (double lv : unit.profile.log_values)
    CHECK(lv == doctest::Approx(0.0).epsilon(1e-10));

  // the exponential is a beta mix of a gamma at every order
  const RecoveredMixing e =
      recover_mixing_mellin(make_exponential(1.0), 2.0, grid, 1e-9);
  CHECK(e.validity.passed);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(e.profile.log_values[i] ==
          doctest::Approx(log_gamma(3.0 + grid[i]) - log_gamma(3.0))
              .epsilon(1e-10));
}

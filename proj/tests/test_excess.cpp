#include <cmath>

#include "doctest.h"
#include "melt/dist.hpp"
#include "melt/excess.hpp"
#include "melt/mellin.hpp"
#include "melt/special.hpp"

using namespace melt;

TEST_CASE("the exponential is the fixed point") {
  CHECK(check_exp_fixed_point(1.0, 2.0, make_grid(0.0, 5.0, 0.25),
                              make_grid(0.5, 4.0, 0.5), 1e-6)
            .passed);
  // gamma-ratio route at any order reproduces Gamma(lambda + 1)
  for (double t : {0.5, 3.0}) {
    CHECK(excess_mellin(make_exponential(1.0), t, 2.0).value ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(excess_mellin(make_exponential(1.0), t, 3.5).value ==
          doctest::Approx(std::exp(log_gamma(4.5))).epsilon(1e-10));
  }
}

TEST_CASE("closed excess of the uniform") {
  // E[(U - x)_+] / E[U] = (1 - x)^2 on (0,1)
  const auto z = excess(make_uniform(0.0, 1.0), 1.0);
  CHECK(survival(*z, 0.5) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(excess_mellin(make_uniform(0.0, 1.0), 1.0, 1.0).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("excess density from the lower-order tail") {
  // order 1: S_X / E[X]; Exp(2) maps to itself
  const auto z1 = excess(make_exponential(2.0), 1.0);
  CHECK(density(*z1, 0.7) ==
        doctest::Approx(2.0 * std::exp(-1.4)).epsilon(1e-8));
  // order 2 on U(0,1): f(x) = 3 (1 - x)^2
  const auto z2 = excess(make_uniform(0.0, 1.0), 2.0);
  CHECK(density(*z2, 0.5) == doctest::Approx(0.75).epsilon(1e-7));
}

TEST_CASE("orders compose as a semigroup") {
  CHECK(check_semigroup(make_gamma(2.0), 1.0, 1.5, make_grid(0.5, 3.0, 0.5),
                        1e-5)
            .passed);
}

TEST_CASE("discrete iteration matches the continuous order") {
  const auto grid = make_grid(0.5, 3.0, 0.5);
  const auto it = iterate_discrete(make_uniform(0.0, 1.0), 2);
  const auto direct = excess(make_uniform(0.0, 1.0), 2.0);
  CHECK(mellin_distance(*it, *direct, grid) < 1e-7);

  const auto d = make_gamma(2.0);
  CHECK(iterate_discrete(d, 0).get() == d.get());
  CHECK(excess(d, 0.0).get() == d.get());
  CHECK_THROWS_AS(iterate_discrete(d, 9), InvalidSpec);
}

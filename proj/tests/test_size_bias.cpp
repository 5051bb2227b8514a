#include <cmath>

#include "doctest.h"
#include "melt/dist.hpp"
#include "melt/levy.hpp"
#include "melt/mellin.hpp"
#include "melt/size_bias.hpp"
#include "melt/special.hpp"

using namespace melt;

TEST_CASE("closed-form promotions") {
  const auto g = size_bias(make_gamma(2.0), 1.5);
  REQUIRE(variant_name(*g) == "gamma");
  CHECK(g->get_if<GammaD>()->shape == doctest::Approx(3.5));

  const auto b = size_bias(make_beta(2.0, 3.0), 1.0);
  REQUIRE(variant_name(*b) == "beta");
  CHECK(b->get_if<BetaD>()->a == doctest::Approx(3.0));
  CHECK(b->get_if<BetaD>()->b == doctest::Approx(3.0));

  const auto bt = size_bias(make_beta_t(4.0), 2.0);
  REQUIRE(variant_name(*bt) == "beta");
  CHECK(bt->get_if<BetaD>()->a == doctest::Approx(3.0));
  CHECK(bt->get_if<BetaD>()->b == doctest::Approx(4.0));

  const auto ln = size_bias(make_log_normal(0.1, 0.6), 2.0);
  REQUIRE(variant_name(*ln) == "log_normal");
  CHECK(ln->get_if<LogNormalD>()->mu == doctest::Approx(0.1 + 1.2));
  CHECK(ln->get_if<LogNormalD>()->sigma2 == doctest::Approx(0.6));

  // order 0 is the identity
  const auto d = make_gamma(1.3);
  CHECK(size_bias(d, 0.0).get() == d.get());
}

TEST_CASE("ratio formula for every promotion") {
  const DistPtr cases[] = {
      make_exponential(2.0),
      make_gamma(2.5),
      make_beta(1.5, 2.5),
      make_beta_t(3.0),
      make_log_normal(-0.2, 0.9),
      make_uniform(0.0, 2.5),
      make_product(make_uniform(0.0, 1.0), make_gamma(2.0)),
  };
  const double t = 1.25;
  for (const auto& d : cases) {
    const auto biased = size_bias(d, t);
    for (double lam : {0.5, 1.0, 2.0}) {
      const double want = log_mellin(*d, lam + t).log_value -
                          log_mellin(*d, t).log_value;
      CHECK(log_mellin(*biased, lam).log_value ==
            doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("generic node matches the promoted family through quadrature") {
  const auto d = make_log_normal(0.0, 0.5);
  const auto node = size_bias_wrapper(d, 1.5);
  const auto promoted = size_bias(d, 1.5);
  CHECK(variant_name(*node) == "size_biased");
  CHECK(variant_name(*promoted) == "log_normal");
  for (double x : {0.5, 1.0, 2.0, 4.0})
    CHECK(survival(*node, x) ==
          doctest::Approx(survival(*promoted, x)).epsilon(1e-7));
  CHECK(mellin_via_survival(*node, 1.0).value ==
        doctest::Approx(mellin(*promoted, 1.0).value).epsilon(1e-6));
}

TEST_CASE("tail-integral survival of the biased law") {
  // biased U(0,1) at order 1 is Beta(2,1): S(x) = 1 - x^2
  const double s = biased_survival(make_uniform(0.0, 1.0), 1.0, 0.6);
  CHECK(s == doctest::Approx(1.0 - 0.36).epsilon(1e-8));
}

TEST_CASE("operator identities hold on a smooth base") {
  const auto checks = check_properties(make_log_normal(0.0, 0.5), 0.8, 1.3,
                                       make_grid(0.5, 3.0, 0.5), 1e-6);
  for (const auto& c : checks) {
    CAPTURE(c.name);
    CHECK(c.passed);
  }
  CHECK(check_dominance(make_gamma(2.0), 1.5,
                        {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0}, 1e-8)
            .passed);
}

TEST_CASE("exponential tilt closes the levy family") {
  LevySpec s;
  s.d = 0.05;
  s.sigma2 = 0.4;
  s.jumps.kind = JumpKind::compound_poisson;
  s.jumps.rate = 1.0;
  s.jumps.jump_mean = 1.0;
  const double t = 2.0;
  const auto biased = size_bias(make_exp_levy(s), t);
  REQUIRE(variant_name(*biased) == "exp_levy");
  const LevySpec tilted = levy_tilt(s, t);
  for (double lam : {0.5, 1.0, 2.0})
    CHECK(levy_exponent(tilted, lam) ==
          doctest::Approx(levy_exponent(s, lam + t) - levy_exponent(s, t))
              .epsilon(1e-12));
  CHECK(log_mellin(*biased, 1.0).log_value ==
        doctest::Approx(levy_exponent(s, 1.0 + t) - levy_exponent(s, t))
            .epsilon(1e-12));
}

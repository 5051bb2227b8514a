#include <cmath>
#include <sstream>

#include "doctest.h"
#include "melt/dist.hpp"
#include "melt/errors.hpp"
#include "melt/excess.hpp"
#include "melt/io.hpp"
#include "melt/limit.hpp"
#include "melt/mellin.hpp"
#include "melt/size_bias.hpp"

using namespace melt;

TEST_CASE("specs round-trip through JSON byte-stably") {
  const auto leafs = {
      make_exponential(0.7),
      make_gamma(2.5),
      make_beta(1.5, 2.0),
      make_beta_t(3.0),
      make_log_normal(-0.3, 1.1),
      make_uniform(0.5, 2.0),
      make_perturbed_log_normal(0.0, 1.0, 0.25),
  };
  for (const auto& d : leafs) {
    const Json j = spec_to_json(d);
    const DistPtr back = spec_from_json(j);
    CHECK(spec_to_json(back).dump() == j.dump());
    CHECK(mellin_distance(*d, *back, make_grid(0.5, 3.0, 0.5)) == 0.0);
  }

  // nested wrappers keep their structure
  const auto deep = scale(
      make_excess_node(
          make_size_biased_node(
              make_product(make_log_normal(0.0, 0.5), make_uniform(0.0, 1.0)),
              0.5),
          1.5),
      2.0);
  const Json j = spec_to_json(deep);
  const DistPtr back = spec_from_json(j);
  CHECK(spec_to_json(back).dump() == j.dump());
  CHECK(variant_name(*back) == "scaled");

  CHECK_THROWS_AS(spec_from_json(Json{{"variant", "no_such_family"}}),
                  InvalidSpec);
  CHECK_THROWS_AS(spec_from_json(Json{{"variant", "gamma"}}), InvalidSpec);
}

TEST_CASE("levy specs round-trip for every jump kind") {
  LevySpec none;
  none.d = -0.1;
  none.sigma2 = 0.9;

  LevySpec cp;
  cp.d = 0.05;
  cp.sigma2 = 0.4;
  cp.jumps.kind = JumpKind::compound_poisson;
  cp.jumps.rate = 1.0;
  cp.jumps.jump_mean = 1.0;

  LevySpec at;
  at.sigma2 = 0.2;
  at.jumps.kind = JumpKind::finite_atoms;
  at.jumps.atoms = {{0.5, 0.3}, {0.25, 1.5}};

  for (const auto& s : {none, cp, at}) {
    const Json j = levy_to_json(s);
    const LevySpec back = levy_from_json(j);
    CHECK(levy_to_json(back).dump() == j.dump());
    for (double lam : {0.5, 1.0, 3.0})
      CHECK(levy_exponent(back, lam) ==
            doctest::Approx(levy_exponent(s, lam)).epsilon(1e-15));
  }

  // exp_levy distribution nodes embed the same schema
  const auto d = make_exp_levy(cp);
  const DistPtr back = spec_from_json(spec_to_json(d));
  CHECK(variant_name(*back) == "exp_levy");
  CHECK(mellin_distance(*d, *back, make_grid(0.5, 3.0, 0.5)) == 0.0);
}

TEST_CASE("survival grids parse from loose CSV") {
  std::istringstream in(
      "# tail table\n"
      "0, 1.0\n"
      "0.5; 0.61\n"
      "1.0\t0.37   # inline note\n"
      "2.0 0.14\n"
      "4.0 0.02\n");
  const DistPtr d = grid_from_csv(in);
  CHECK(variant_name(*d) == "grid_survival");
  CHECK(survival(*d, 1.0) == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(survival(*d, 5.0) == 0.0);

  std::istringstream bad("1.0 0.5\n2.0 0.9\n");
  CHECK_THROWS_AS(grid_from_csv(bad), InvalidSpec);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(grid_from_csv(empty), InvalidSpec);
}

TEST_CASE("digest matches the FNV-1a test vectors") {
  CHECK(config_digest("") == 0xcbf29ce484222325ULL);
  CHECK(config_digest("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(config_digest("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("csv header carries the digest") {
  std::ostringstream out;
  csv_begin(out, "lambda,value", 0xdeadbeefULL);
  const std::string s = out.str();
  CHECK(s.find("# config_digest=00000000deadbeef") == 0);
  CHECK(s.find("lambda,value\n") != std::string::npos);
}

TEST_CASE("reports serialize completely") {
  const auto rep = convergence_report(make_log_normal(0.0, 1.0), 1.0,
                                      {2.0, 4.0}, {1.0}, 500, 5, 1.0);
  const Json j = report_to_json(rep);
  for (const char* key :
       {"alpha", "t_grid", "rho", "c_estimates", "fitted_c", "limit",
        "lambdas", "mellin_rel_err", "ks", "x_ladder", "ui_tail", "verdict"})
    CHECK(j.contains(key));
  CHECK(j["ks"].size() == 2);

  std::ostringstream csv;
  report_to_csv(rep, 7, csv);
  const std::string body = csv.str();
  CHECK(body.find("# config_digest=0000000000000007") == 0);
  CHECK(body.find("rho") != std::string::npos);
  CHECK(body.find("ks") != std::string::npos);

  const Json ji = indeterminacy_to_json(indeterminacy_demo(0.0, 1.0, 0.5, 2, 0.5));
  CHECK(ji.contains("probe_gap"));
  CHECK(ji.contains("rel_gaps"));

  const CheckResult c = CheckResult::of("x", 0.5, 1.0, "here");
  const Json jc = check_to_json(c);
  CHECK(jc["passed"] == true);
  CHECK(jc["worst"] == 0.5);
}

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "melt/dist.hpp"
#include "melt/excess.hpp"
#include "melt/levy.hpp"
#include "melt/limit.hpp"
#include "melt/mellin.hpp"
#include "melt/rng.hpp"
#include "melt/size_bias.hpp"

using namespace melt;

namespace {
double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}
}  // namespace

TEST_CASE("batches are bit-identical for a fixed seed") {
  const auto d = excess(make_log_normal(0.0, 1.0), 2.5);
  const SampleBatch a = sample(d, 1000, 99);
  const SampleBatch b = sample(d, 1000, 99);
  REQUIRE(a.values.size() == 1000);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    CHECK(a.values[i] == b.values[i]);
  const SampleBatch c = sample(d, 1000, 100);
  int diff = 0;
  for (std::size_t i = 0; i < c.values.size(); ++i)
    diff += c.values[i] != a.values[i];
  CHECK(diff > 990);
}

TEST_CASE("scale pushdown preserves the underlying stream") {
  const SampleBatch base = sample(make_exponential(1.0), 256, 7);
  const SampleBatch scaled = sample(scale(make_exponential(1.0), 3.0), 256, 7);
  for (std::size_t i = 0; i < base.values.size(); ++i)
    CHECK(scaled.values[i] == doctest::Approx(3.0 * base.values[i]).epsilon(1e-15));
}

TEST_CASE("sample means match the first moment") {
  struct Case {
    DistPtr d;
    double mean;
  };
  const Case cases[] = {
      {make_exponential(1.0), 1.0},
      {make_log_normal(0.0, 1.0), std::exp(0.5)},
      {make_beta_t(3.0), 0.25},
      {make_gamma(2.5), 2.5},
      {make_product(make_uniform(0.0, 1.0), make_uniform(0.0, 1.0)), 0.25},
      {make_beta(2.0, 3.0), 0.4},
  };
  std::uint64_t tag = 1;
  for (const auto& c : cases) {
    const SampleBatch b = sample(c.d, 200000, mix_seed(2024, tag++));
    CHECK(mean_of(b.values) == doctest::Approx(c.mean).epsilon(0.02));
  }
}

TEST_CASE("derived-node samplers agree with their laws") {
  // size-biased uniform is Beta(2,1): mean 2/3
  const SampleBatch sb = sample(size_bias_wrapper(make_uniform(0.0, 1.0), 1.0),
                                100000, 5);
  CHECK(mean_of(sb.values) == doctest::Approx(2.0 / 3.0).epsilon(0.01));

  // excess of Exp(1) has the law of Exp(1) again
  const SampleBatch ex = sample(excess(make_exponential(1.0), 1.0), 20000, 11);
  const SampleBatch ref = sample(make_exponential(1.0), 20000, 12);
  CHECK(ks_statistic(ex.values, ref.values) < 0.02);
}

TEST_CASE("exp-levy sampler matches the closed first moment") {
  LevySpec s;
  s.d = 0.05;
  s.sigma2 = 0.4;
  s.jumps.kind = JumpKind::compound_poisson;
  s.jumps.rate = 1.0;
  s.jumps.jump_mean = 1.0;
  const auto d = make_exp_levy(s);
  const double m1 = std::exp(levy_exponent(s, 1.0));
  const SampleBatch b = sample(d, 200000, 31);
  CHECK(mean_of(b.values) == doctest::Approx(m1).epsilon(0.02));
}

TEST_CASE("point mass sampling is constant") {
  const SampleBatch b = sample(make_point_mass(1.75), 16, 3);
  for (double v : b.values) CHECK(v == doctest::Approx(1.75));
}

TEST_CASE("seed mixing separates child streams") {
  CHECK(mix_seed(42, 1) != mix_seed(42, 2));
  CHECK(mix_seed(42, 1) != mix_seed(43, 1));
  Rng r(9);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double u = r.u01();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

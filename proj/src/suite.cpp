#include "melt/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "melt/dist.hpp"
#include "melt/excess.hpp"
#include "melt/levy.hpp"
#include "melt/limit.hpp"
#include "melt/mellin.hpp"
#include "melt/rng.hpp"
#include "melt/size_bias.hpp"
#include "melt/special.hpp"
#include "melt/tmono.hpp"

namespace melt {
namespace {

// collects sub-check margins: value - tol per entry, so <= 0 means pass
struct Margins {
  double worst = -std::numeric_limits<double>::infinity();
  std::string detail;

  void add(const char* label, double value, double tol) {
    worst = std::max(worst, value - tol);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s %.3g (tol %.3g)", label, value, tol);
    if (!detail.empty()) detail += "; ";
    detail += buf;
  }
  void add(const CheckResult& r) { add(r.name.c_str(), r.worst, r.tol); }
  void require(const char* label, bool ok) {
    worst = std::max(worst, ok ? -1.0 : 1.0);
    if (!detail.empty()) detail += "; ";
    detail += label;
    detail += ok ? " ok" : " FAILED";
  }
};

CriterionResult finish(int id, const char* name, const Margins& m) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.worst = m.worst;
  r.passed = m.worst <= 0.0;
  r.detail = m.detail;
  return r;
}

LevySpec example_levy() {
  LevySpec s;
  s.d = 0.05;
  s.sigma2 = 0.4;
  s.jumps.kind = JumpKind::compound_poisson;
  s.jumps.rate = 1.0;
  s.jumps.jump_mean = 1.0;
  return s;
}

// 1. excess orders fix the exponential law: both Mellin routes return
// Gamma(lambda+1) to 1e-6 relative
CriterionResult crit_exp_fixed_point(std::uint64_t) {
  Margins m;
  const DistPtr e1 = make_exponential(1.0);
  const auto lambdas = default_lambda_grid();
  double worst_ratio = 0.0, worst_surv = 0.0;
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    const DistPtr ex = excess(e1, t);
    for (double lam : lambdas) {
      const double target = std::exp(log_gamma(lam + 1.0));
      const double via_ratio = excess_mellin(e1, t, lam).value;
      const double via_surv = mellin_via_survival(*ex, lam).value;
      worst_ratio =
          std::max(worst_ratio, std::fabs(via_ratio - target) / target);
      worst_surv =
          std::max(worst_surv, std::fabs(via_surv - target) / target);
    }
  }
  m.add("gamma-ratio route", worst_ratio, 1e-6);
  m.add("survival route", worst_surv, 1e-6);
  return finish(1, "exponential fixed point", m);
}

// 2. operator semigroup: nested vs flat composition, plus the discrete
// iteration against the continuous order
CriterionResult crit_semigroup(std::uint64_t) {
  Margins m;
  const DistPtr ln = make_log_normal(0.0, 1.0);
  m.add(check_semigroup(ln, 2.0, 1.0, default_lambda_grid(), 1e-5));
  const DistPtr u = make_uniform(0.0, 1.0);
  const double d = mellin_distance(*iterate_discrete(u, 3), *excess(u, 3.0),
                                   default_lambda_grid());
  m.add("iterated unit order vs order 3", d, 1e-6);
  return finish(2, "excess semigroup", m);
}

// 3. independent Beta and Gamma factors: the two classical factorization
// identities, randomized
CriterionResult crit_beta_gamma(std::uint64_t seed) {
  Margins m;
  Rng rng(mix_seed(seed, 3));
  double worst_gamma = 0.0, worst_beta = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a = 0.2 + 4.8 * rng.u01();
    const double b = 0.2 + 4.8 * rng.u01();
    const double c = 0.2 + 4.8 * rng.u01();
    const DistPtr lhs = make_product(make_beta(a, b), make_gamma(a + b));
    for (int k = 0; k < 5; ++k) {
      const double lam = 0.1 + 3.9 * rng.u01();
      const double g1 = log_mellin(*make_gamma(a), lam).log_value;
      const double g2 = log_mellin(*lhs, lam).log_value;
      worst_gamma = std::max(worst_gamma, std::fabs(g1 - g2));
      const double h1 = log_mellin(*make_beta(a, b + c), lam).log_value;
      const double h2 = log_mellin(*make_beta(a, b), lam).log_value +
                        log_mellin(*make_beta(a + b, c), lam).log_value;
      worst_beta = std::max(worst_beta, std::fabs(h1 - h2));
    }
  }
  m.add("gamma factorization", worst_gamma, 1e-10);
  m.add("beta composition", worst_beta, 1e-10);
  return finish(3, "beta-gamma algebra", m);
}

// 4. log-normal input reproduces its own limit at every order
CriterionResult crit_lognormal_self_similar(std::uint64_t) {
  Margins m;
  const auto lambdas = default_lambda_grid();
  for (double sigma2 : {0.3, 1.0}) {
    const DistPtr d = make_log_normal(0.0, sigma2);
    const LimitLaw law = limit_law(1.0, sigma2);
    double worst_c = 0.0, worst_m = 0.0;
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0}) {
      for (double s : {0.5, 1.0, 2.0})
        worst_c = std::max(worst_c,
                           std::fabs(estimate_c(d, t, s).value - sigma2));
      const DistPtr x_t = normalized_family(d, 1.0, t, FamilyKind::bias);
      for (double lam : lambdas) {
        const double gap = log_mellin(*x_t, lam).log_value -
                           log_mellin(*law.x_inf, lam).log_value;
        worst_m = std::max(worst_m, std::fabs(std::expm1(gap)));
      }
    }
    const char* lc = sigma2 == 0.3 ? "c flat (s2=0.3)" : "c flat (s2=1)";
    const char* lm =
        sigma2 == 0.3 ? "Mellin vs limit (s2=0.3)" : "Mellin vs limit (s2=1)";
    m.add(lc, worst_c, 1e-10);
    m.add(lm, worst_m, 1e-8);
  }
  return finish(4, "log-normal self-similarity", m);
}

// 5. geometric Levy model: c estimates slide down to sigma2 and the closed
// second-difference formula matches the cumulant
CriterionResult crit_levy(std::uint64_t) {
  Margins m;
  const LevySpec spec = example_levy();
  const DistPtr x = dist_from_levy(spec);
  double prev = std::numeric_limits<double>::infinity();
  double worst_step = -std::numeric_limits<double>::infinity();
  double c50 = 0.0;
  for (double t : {5.0, 10.0, 20.0, 30.0, 40.0, 50.0}) {
    const double v = estimate_c(x, t, 1.0).value;
    if (std::isfinite(prev)) worst_step = std::max(worst_step, v - prev);
    prev = v;
    c50 = v;
  }
  m.add("c estimate step (must fall)", worst_step, 0.0);
  m.add("|c(50) - sigma2|", std::fabs(c50 - spec.sigma2), 0.01);
  m.add(check_levy_delta(spec, {0.5, 1.0, 5.0, 20.0, 50.0}, {0.5, 1.0, 2.0},
                         1e-10));
  return finish(5, "Levy example", m);
}

// 6. Monte Carlo convergence of the companion family to the exponential
// times log-normal limit
CriterionResult crit_mc_limit(std::uint64_t seed) {
  Margins m;
  const auto rep =
      convergence_report(make_log_normal(0.0, 1.0), 1.0,
                         {5.0, 10.0, 20.0, 40.0}, make_grid(0.5, 3.0, 0.5),
                         100000, mix_seed(seed, 6), 1.0);
  double worst_step = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rep.ks.size(); ++i)
    worst_step = std::max(worst_step, rep.ks[i] - rep.ks[i - 1]);
  m.add("KS step (must fall)", worst_step, 1e-9);
  m.add("final KS", rep.ks.back(), 0.01);
  m.require("report verdict", rep.verdict.passed);
  return finish(6, "Monte Carlo limit", m);
}

// 7. closed-form identities of the limit pair over an (alpha, c, s) grid
CriterionResult crit_fixed_point(std::uint64_t) {
  Margins m;
  const auto lambdas = make_grid(0.25, 4.0, 0.25);
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 2.0, 4.0, 8.0})
    for (double c : {0.0, 0.25, 0.5, 1.0, 2.0})
      for (double s : {0.0, 0.5, 1.0, 2.5, 4.0}) {
        const CheckResult r =
            check_fixed_point(limit_law(alpha, c), s, lambdas, 1e-12);
        worst = std::max(worst, r.worst);
      }
  m.add("identity gap over 5x5x5 grid", worst, 1e-12);
  return finish(7, "limit fixed-point identities", m);
}

// 8. equal integer moments, distinct fractional Mellin values
CriterionResult crit_indeterminacy(std::uint64_t) {
  Margins m;
  const IndeterminacyReport rep = indeterminacy_demo(0.0, 1.0, 0.5, 8, 0.5);
  const double worst_gap =
      *std::max_element(rep.rel_gaps.begin(), rep.rel_gaps.end());
  m.add("integer moment relative gap", worst_gap, 1e-6);
  // the probe must separate the laws, so the margin flips sign
  m.add("probe separation shortfall", 1e-3 - rep.probe_gap, 0.0);
  m.add("probe gap vs closed form",
        std::fabs(rep.probe_gap - rep.closed_probe_gap),
        1e-6 * std::max(1.0, rep.closed_probe_gap));
  return finish(8, "moment indeterminacy", m);
}

DistPtr random_family(Rng& rng) {
  const int which = static_cast<int>(rng.u01() * 6.0);
  switch (which) {
    case 0:
      return make_exponential(0.3 + 2.7 * rng.u01());
    case 1:
      return make_gamma(0.5 + 3.5 * rng.u01());
    case 2:
      return make_beta(0.4 + 3.6 * rng.u01(), 0.4 + 3.6 * rng.u01());
    case 3:
      return make_log_normal(-1.0 + 2.0 * rng.u01(), 0.1 + 1.4 * rng.u01());
    case 4:
      return make_uniform(0.0, 0.5 + 2.5 * rng.u01());
    default:
      return make_beta_t(1.0 + 3.0 * rng.u01());
  }
}

// 9. randomized structural battery: log-convexity, moment-ratio
// monotonicity, Lyapunov ordering, stochastic dominance, and the weighting
// operator rules
CriterionResult crit_structural(std::uint64_t seed) {
  Margins m;
  Rng rng(mix_seed(seed, 9));
  const std::vector<double> lam_grid = make_grid(0.5, 4.0, 0.5);
  const std::vector<double> ts = {0.5, 1.0, 2.0, 3.0};
  const std::vector<double> xs = {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0};
  double w_convex = -1.0, w_ratio = -1.0, w_lyap = -1.0, w_dom = -1.0,
         w_props = -1.0;
  int n_checks = 0;
  for (int i = 0; i < 200; ++i) {
    const DistPtr d = random_family(rng);
    switch (i % 5) {
      case 0: {
        const auto p = log_mellin_profile(*d, lam_grid);
        w_convex = std::max(w_convex, check_log_convexity(p, 1e-9).worst);
        break;
      }
      case 1: {
        const double lam = 0.5 + 2.0 * rng.u01();
        w_ratio = std::max(w_ratio,
                           check_ratio_monotone(*d, lam, ts, 1e-10).worst);
        break;
      }
      case 2:
        w_lyap = std::max(w_lyap, check_lyapunov(*d, lam_grid, 1e-10).worst);
        break;
      case 3: {
        const double t = 0.25 + 2.0 * rng.u01();
        w_dom = std::max(w_dom, check_dominance(d, t, xs, 1e-8).worst);
        break;
      }
      default: {
        const double t = 0.25 + 1.75 * rng.u01();
        const double s = 0.25 + 1.75 * rng.u01();
        const auto rs =
            check_properties(d, t, s, {0.5, 1.0, 2.0, 3.0}, 1e-6);
        for (const auto& r : rs) w_props = std::max(w_props, r.worst - r.tol);
        break;
      }
    }
    ++n_checks;
  }
  m.add("log-convexity", w_convex, 1e-9);
  m.add("ratio monotonicity", w_ratio, 1e-10);
  m.add("Lyapunov ordering", w_lyap, 1e-10);
  m.add("dominance", w_dom, 1e-8);
  m.add("weighting rules margin", w_props, 0.0);
  m.require("200 draws executed", n_checks == 200);
  return finish(9, "structural suite", m);
}

// 10. t-monotone machinery: certificates, downward closure, recovery of the
// mixing transform, truncated-exponential limit, and the uniform
// counterexample
CriterionResult crit_tmonotone(std::uint64_t seed) {
  Margins m;
  Rng rng(mix_seed(seed, 10));
  const auto lam_grid = default_lambda_grid();

  m.add(check_k_monotone(beta_mix(make_point_mass(1.0), 4.0), 4, 1.0 / 256,
                         1.0));
  m.add(check_k_monotone(beta_mix(make_gamma(4.0), 3.0), 3, 1.0 / 64, 8.0));
  m.add(check_k_monotone(make_exponential(1.0), 6, 0.0, 5.0));

  double worst_exp_gap = 0.0;
  const DistPtr mixed = beta_mix(make_gamma(4.0), 3.0);
  for (double lam : lam_grid) {
    const double gap = log_mellin(*mixed, lam).log_value -
                       log_gamma(lam + 1.0);
    worst_exp_gap = std::max(worst_exp_gap, std::fabs(gap));
  }
  m.add("mix of gamma equals exponential", worst_exp_gap, 1e-8);

  double w_closure = -1.0;
  for (const DistPtr& y :
       {make_gamma(2.0), make_log_normal(0.0, 0.5), make_uniform(0.0, 1.0)}) {
    const double t = 1.0 + 4.0 * rng.u01();
    const double s = t * (0.2 + 0.6 * rng.u01());
    w_closure = std::max(
        w_closure, check_downward_closure(y, s, t, lam_grid, 1e-8).worst);
  }
  m.add("downward closure", w_closure, 1e-8);

  const DistPtr y = make_gamma(2.0);
  const RecoveredMixing rec =
      recover_mixing_mellin(beta_mix(y, 1.5), 1.5, lam_grid, 1e-9);
  const auto direct = log_mellin_profile(*y, lam_grid);
  double w_rec = 0.0;
  for (std::size_t i = 0; i < lam_grid.size(); ++i)
    w_rec = std::max(w_rec, std::fabs(rec.profile.log_values[i] -
                                      direct.log_values[i]));
  m.add("recover after mix", w_rec, 1e-7);
  m.require("recovered profile certified", rec.validity.passed);

  m.add(check_cm_limit({1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0},
                       make_grid(0.0, 10.0, 0.05)));

  const CheckResult u2 =
      check_k_monotone(make_uniform(0.0, 1.0), 2, 1.0 / 256, 1.0);
  m.require("uniform rejected at k=2", !u2.passed);
  const CheckResult u1 =
      check_k_monotone(make_uniform(0.0, 1.0), 1, 1.0 / 256, 1.0);
  m.require("uniform accepted at k=1", u1.passed);
  return finish(10, "t-monotone suite", m);
}

// 11. the c fit does not care whether the order grid is integer or real
CriterionResult crit_grid_equivalence(std::uint64_t) {
  Margins m;
  const auto fit = [](const DistPtr& d, const std::vector<double>& grid) {
    return estimate_c(d, grid.back(), 1.0).value;
  };
  const std::vector<double> grid_int = make_grid(1.0, 50.0, 1.0);
  const std::vector<double> grid_real = make_grid(0.5, 49.5, 0.5);
  const DistPtr cases[] = {make_log_normal(0.0, 0.3),
                           make_log_normal(0.0, 1.0),
                           dist_from_levy(example_levy())};
  const char* labels[] = {"log-normal s2=0.3", "log-normal s2=1",
                          "Levy example"};
  for (int i = 0; i < 3; ++i)
    m.add(labels[i],
          std::fabs(fit(cases[i], grid_int) - fit(cases[i], grid_real)),
          1e-6);
  return finish(11, "integer vs real order grids", m);
}

using CriterionFn = CriterionResult (*)(std::uint64_t);

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            std::ostream* log) {
  const CriterionFn fns[] = {
      crit_exp_fixed_point, crit_semigroup,     crit_beta_gamma,
      crit_lognormal_self_similar, crit_levy,   crit_mc_limit,
      crit_fixed_point,     crit_indeterminacy, crit_structural,
      crit_tmonotone,       crit_grid_equivalence};
  std::vector<CriterionResult> out;
  out.reserve(std::size(fns));
  for (const auto& fn : fns) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fn(seed);
    } catch (const std::exception& e) {
      r.id = static_cast<int>(out.size()) + 1;
      r.name = "criterion aborted";
      r.passed = false;
      r.worst = std::numeric_limits<double>::infinity();
      r.detail = e.what();
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (log) {
      char line[256];
      std::snprintf(line, sizeof(line), "%s %2d %-34s margin %10.3e  %6.2fs",
                    r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.worst,
                    r.seconds);
      (*log) << line << "\n    " << r.detail << "\n";
      log->flush();
    }
    out.push_back(std::move(r));
  }
  return out;
}

bool suite_passed(const std::vector<CriterionResult>& rs) {
  if (rs.empty()) return false;
  for (const auto& r : rs)
    if (!r.passed) return false;
  return true;
}

}  // namespace melt

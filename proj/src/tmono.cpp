#include "melt/tmono.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "melt/special.hpp"

namespace melt {

DistPtr beta_mix(const DistPtr& y, double t) {
  if (t == 0.0) return y;  // b_0 is the point mass at 1
  return make_product(make_beta_t(t), y);
}

CheckResult check_k_monotone(const DistPtr& d, int k, double lo, double hi,
                             double tol) {
  if (k < 1) throw InvalidSpec("check_k_monotone: k >= 1");
  if (!(lo >= 0.0) || !(hi > lo))
    throw InvalidSpec("check_k_monotone: need 0 <= lo < hi");

  constexpr int kPts = 257;
  const double h = (hi - lo) / (kPts - 1);
  QuadOptions tight;
  tight.abs_tol = 1e-12;
  tight.rel_tol = 1e-10;

  std::vector<double> cur(kPts);
  double fmax = 0.0;
  for (int i = 0; i < kPts; ++i) {
    cur[i] = density(*d, lo + i * h, tight);
    fmax = std::max(fmax, std::abs(cur[i]));
  }
  const double tol_eff = std::max(tol, 1e-7 * fmax);

  // raw alternating differences: (-1)^j D^j f >= 0 for j = 0..k covers the
  // sign conditions through order k-2 plus monotonicity and convexity of the
  // (k-2)-nd difference.  No h^j division, so float noise stays ~2^j eps |f|.
  double worst = -std::numeric_limits<double>::infinity();
  int worst_level = 0;
  double worst_x = lo;
  int n = kPts;
  for (int j = 0; j <= k; ++j) {
    const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
      const double viol = -sgn * cur[i];
      if (viol > worst) {
        worst = viol;
        worst_level = j;
        worst_x = lo + i * h;
      }
    }
    if (j == k) break;
    for (int i = 0; i + 1 < n; ++i) cur[i] = cur[i + 1] - cur[i];
    --n;
  }

  char name[64];
  std::snprintf(name, sizeof(name), "k_monotone(k=%d)", k);
  char where[96];
  std::snprintf(where, sizeof(where), "difference order %d, x = %.6g",
                worst_level, worst_x);
  return CheckResult::of(name, worst, tol_eff, where);
}

CheckResult check_downward_closure(const DistPtr& y, double s, double t,
                                   const std::vector<double>& lambdas,
                                   double tol) {
  if (!(s > 0.0) || !(t > s))
    throw InvalidSpec("check_downward_closure: need 0 < s < t");
  const DistPtr a = beta_mix(y, t);
  const DistPtr b = make_product(
      make_beta_t(s), make_product(make_beta(1.0 + s, t - s), y));

  double worst = 0.0;
  double worst_lam = lambdas.empty() ? 0.0 : lambdas.front();
  for (double lam : lambdas) {
    const double ga = log_mellin(*a, lam).log_value;
    const double gb = log_mellin(*b, lam).log_value;
    const double gap = std::abs(ga - gb);
    if (gap > worst) {
      worst = gap;
      worst_lam = lam;
    }
  }
  char where[64];
  std::snprintf(where, sizeof(where), "lambda = %.6g", worst_lam);
  return CheckResult::of("downward_closure", worst, tol, where);
}

CheckResult check_cm_limit(const std::vector<double>& ts,
                           const std::vector<double>& xs) {
  if (ts.size() < 2) throw InvalidSpec("check_cm_limit: need at least two ts");
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1]) || !(ts[i - 1] > 0.0))
      throw InvalidSpec("check_cm_limit: ts must be positive increasing");

  std::vector<double> sup(ts.size(), 0.0);
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const double t = ts[j];
    for (double x : xs) {
      if (!(x >= 0.0)) continue;
      sup[j] = std::max(sup[j],
                        std::abs(truncated_exp_kernel(x, t) - std::exp(-x)));
    }
  }

  double worst = -std::numeric_limits<double>::infinity();
  std::string where;
  for (std::size_t j = 1; j < sup.size(); ++j) {
    const double inc = sup[j] - sup[j - 1];
    if (inc > worst) {
      worst = inc;
      char buf[96];
      std::snprintf(buf, sizeof(buf), "sup gap rose from t = %g to t = %g",
                    ts[j - 1], ts[j]);
      where = buf;
    }
  }
  const double bound = std::exp(1.0) / (2.0 * ts.back());
  const double excess_over_bound = sup.back() - bound;
  if (excess_over_bound > worst) {
    worst = excess_over_bound;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "final sup %.3e vs bound %.3e", sup.back(),
                  bound);
    where = buf;
  }
  return CheckResult::of("cm_limit", worst, 1e-14, where);
}

RecoveredMixing recover_mixing_mellin(const DistPtr& z, double t,
                                      const std::vector<double>& lambdas,
                                      double tol) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw InvalidSpec("recover_mixing_mellin: need t >= 0");

  RecoveredMixing out;
  out.profile.lambdas = lambdas;
  out.profile.log_values.reserve(lambdas.size());
  bool all_finite = true;
  for (double lam : lambdas) {
    const double gz = log_mellin(*z, lam).log_value;
    const double gbt =
        t == 0.0 ? 0.0
                 : log_gamma(t + 1.0) + log_gamma(lam + 1.0) -
                       log_gamma(lam + t + 1.0);
    const double g = gz - gbt;
    if (!std::isfinite(g)) all_finite = false;
    out.profile.log_values.push_back(g);
  }

  if (!all_finite) {
    out.validity = CheckResult::of("recovered_mellin_valid",
                                   std::numeric_limits<double>::infinity(), tol,
                                   "nonfinite recovered value");
    return out;
  }
  out.validity = check_log_convexity(out.profile, tol);
  out.validity.name = "recovered_mellin_valid";
  return out;
}

}  // namespace melt

#include "melt/excess.hpp"

#include <cmath>
#include <string>

#include "melt/special.hpp"

namespace melt {

DistPtr excess(const DistPtr& d, double t) {
  if (!d) throw InvalidSpec("excess: missing spec");
  if (!std::isfinite(t) || t < 0.0) throw InvalidSpec("excess: t must be >= 0");
  if (t == 0.0) return d;
  return make_excess_node(d, t);
}

MellinValue excess_mellin(const DistPtr& d, double t, double lambda,
                          const QuadOptions& opt) {
  if (!d) throw InvalidSpec("excess_mellin: missing spec");
  if (!(t >= 0.0)) throw InvalidSpec("excess_mellin: t must be >= 0");
  if (!(lambda > -1.0))
    throw OutOfDomain("excess_mellin: order must exceed -1");
  const LogMellin num = log_mellin(*d, lambda + t, opt);
  const LogMellin den = log_mellin(*d, t, opt);
  const double g = log_gamma(lambda + 1.0) + log_gamma(t + 1.0) -
                   log_gamma(lambda + t + 1.0) + num.log_value - den.log_value;
  MellinValue v;
  v.lambda = lambda;
  v.value = std::exp(g);
  const double rel = num.rel_error + den.rel_error + 1e-14;
  v.abs_error = v.value * rel;
  v.method = (num.closed && den.closed) ? MellinMethod::closed_form
                                        : MellinMethod::quadrature;
  return v;
}

CheckResult check_semigroup(const DistPtr& d, double s, double t,
                            const std::vector<double>& lambdas, double tol) {
  if (!(s >= 0.0) || !(t >= 0.0))
    throw InvalidSpec("semigroup check: orders must be >= 0");
  const DistPtr inner = excess(d, s);
  const DistPtr flat = excess(d, s + t);

  // the nested route evaluates M_{E_s(X)} by integrating the excess survival
  // function, then applies the gamma-ratio step for the outer operator
  auto inner_mellin_surv = [&](double order) {
    return mellin_via_survival(*inner, order).value;
  };

  double worst = -1.0;
  std::string where;
  const double den_inner = t > 0.0 ? inner_mellin_surv(t) : 1.0;
  for (double lam : lambdas) {
    if (!(lam > 0.0))
      throw InvalidSpec("semigroup check: lambda grid must be positive");
    double nested;
    if (t == 0.0) {
      nested = inner_mellin_surv(lam);
    } else {
      nested = std::exp(log_gamma(lam + 1.0) + log_gamma(t + 1.0) -
                        log_gamma(lam + t + 1.0)) *
               inner_mellin_surv(lam + t) / den_inner;
    }
    const double direct = mellin(*flat, lam).value;
    const double v = std::fabs(nested - direct) / std::max(1.0, direct);
    if (v > worst) {
      worst = v;
      where = "lambda=" + std::to_string(lam);
    }
  }
  return CheckResult::of("excess_semigroup", worst, tol, where);
}

DistPtr iterate_discrete(const DistPtr& d, int n) {
  if (!d) throw InvalidSpec("iterate_discrete: missing spec");
  if (n < 0 || n > 8)
    throw InvalidSpec(
        "iterate_discrete: depth must be in [0,8]; use excess(spec, n) for "
        "deeper orders");
  DistPtr cur = d;
  for (int i = 0; i < n; ++i) cur = excess(cur, 1.0);
  return cur;
}

CheckResult check_exp_fixed_point(double rate, double t,
                                  const std::vector<double>& xs,
                                  const std::vector<double>& lambdas,
                                  double tol) {
  const DistPtr base = make_exponential(rate);
  const DistPtr ex = excess(base, t);
  double worst = -1.0;
  std::string where;
  for (double x : xs) {
    const double v = std::fabs(survival(*ex, x) - std::exp(-rate * x));
    if (v > worst) {
      worst = v;
      where = "x=" + std::to_string(x);
    }
  }
  for (double lam : lambdas) {
    const double lhs = excess_mellin(base, t, lam).value;
    const double rhs = std::exp(log_mellin(*base, lam).log_value);
    const double v = std::fabs(lhs - rhs) / std::max(1.0, rhs);
    if (v > worst) {
      worst = v;
      where = "lambda=" + std::to_string(lam);
    }
  }
  return CheckResult::of("excess_exp_fixed_point", worst, tol, where);
}

}  // namespace melt

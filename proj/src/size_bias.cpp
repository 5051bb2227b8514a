#include "melt/size_bias.hpp"

#include <cmath>
#include <string>

#include "melt/levy_spec.hpp"
#include "melt/mellin.hpp"
#include "melt/special.hpp"

namespace melt {

DistPtr size_bias(const DistPtr& d, double t) {
  if (!d) throw InvalidSpec("size_bias: missing spec");
  if (!std::isfinite(t) || t < 0.0)
    throw InvalidSpec("size_bias: t must be >= 0");
  if (t == 0.0) return d;
  if (!mellin_domain(*d).contains(t))
    throw OutOfDomain("size_bias: t outside the Mellin strip");

  if (is_point_mass(*d)) return d;

  if (const auto* e = d->get_if<ExponentialD>())
    return scale(make_gamma(1.0 + t), 1.0 / e->rate);
  if (const auto* g = d->get_if<GammaD>()) return make_gamma(g->shape + t);
  if (const auto* b = d->get_if<BetaD>()) return make_beta(b->a + t, b->b);
  if (const auto* bt = d->get_if<BetaTD>()) return make_beta(1.0 + t, bt->t);
  if (const auto* ln = d->get_if<LogNormalD>())
    return make_log_normal(ln->mu + ln->sigma2 * t, ln->sigma2);
  if (const auto* u = d->get_if<UniformD>()) {
    if (u->lo == 0.0) return scale(make_beta(1.0 + t, 1.0), u->hi);
    return make_size_biased_node(d, t);
  }
  if (const auto* sc = d->get_if<ScaledD>())
    return scale(size_bias(sc->base, t), sc->factor);
  if (const auto* sb = d->get_if<SizeBiasedD>())
    return size_bias(sb->base, sb->t + t);
  if (const auto* ex = d->get_if<ExcessD>())
    return make_product(make_beta(1.0 + t, ex->t), size_bias(ex->base, ex->t + t));
  if (const auto* pr = d->get_if<ProductD>())
    return make_product(size_bias(pr->left, t), size_bias(pr->right, t));
  if (const auto* lv = d->get_if<ExpLevyD>())
    return make_exp_levy(levy_tilt(lv->levy, t));
  return make_size_biased_node(d, t);
}

DistPtr size_bias_wrapper(const DistPtr& d, double t) {
  return make_size_biased_node(d, t);
}

double biased_survival(const DistPtr& d, double t, double x,
                       const QuadOptions& opt) {
  if (t == 0.0) return survival(*d, x, opt);
  return survival(*make_size_biased_node(d, t), x, opt);
}

namespace {

double profile_distance(const Dist& a, const Dist& b,
                        const std::vector<double>& lambdas) {
  return mellin_distance(a, b, lambdas);
}

}  // namespace

std::vector<CheckResult> check_properties(const DistPtr& d, double t, double s,
                                          const std::vector<double>& lambdas,
                                          double tol) {
  std::vector<CheckResult> out;

  // ratio formula: M_{X_(t)}(lambda) = M_X(t + lambda) / M_X(t)
  {
    const DistPtr promoted = size_bias(d, t);
    double worst = -1.0;
    std::string where;
    for (double lam : lambdas) {
      const double lhs = std::exp(log_mellin(*promoted, lam).log_value);
      const double rhs = std::exp(log_mellin(*d, lam + t).log_value -
                                  log_mellin(*d, t).log_value);
      const double v = std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
      if (v > worst) {
        worst = v;
        where = "lambda=" + std::to_string(lam);
      }
    }
    out.push_back(CheckResult::of("bias_ratio_formula", worst, tol, where));
  }

  // exponent additivity: (X_(s))_(t) and X_(s+t) share the profile
  {
    const double v =
        profile_distance(*size_bias(size_bias(d, s), t), *size_bias(d, s + t),
                         lambdas);
    out.push_back(CheckResult::of("bias_additivity", v, tol,
                                  "s=" + std::to_string(s)));
  }

  // power rescaling: weighting X^r by t equals raising the r*t-weighted law
  // to the r-th power, i.e. E[(X^r)^{lambda+t}]/E[(X^r)^t] equals the
  // (r lambda)-order Mellin of X_(r t). When the base has a density the left
  // side goes through an independent density quadrature.
  {
    const double r = 2.0;
    double worst = -1.0;
    std::string where;
    auto power_moment = [&](double order) {
      // E[X^{order}] through the density of X
      auto f = [&](double y) {
        const double x = std::exp(y);
        if (!std::isfinite(x) || x <= 0.0) return 0.0;
        const double fd = density(*d, x);
        if (fd <= 0.0) return 0.0;
        return std::exp((order + 1.0) * y) * fd;
      };
      return integrate_or_throw(f, -std::numeric_limits<double>::infinity(),
                                std::numeric_limits<double>::infinity(),
                                QuadOptions{}, "power moment");
    };
    const DistPtr biased_rt = size_bias(d, r * t);
    const bool dens = has_density(*d);
    const double den = dens ? power_moment(r * t) : 0.0;
    for (double lam : lambdas) {
      double lhs;
      if (dens)
        lhs = power_moment(r * (lam + t)) / den;
      else
        lhs = std::exp(log_mellin(*d, r * (lam + t)).log_value -
                       log_mellin(*d, r * t).log_value);
      const double rhs = std::exp(log_mellin(*biased_rt, r * lam).log_value);
      const double v = std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
      if (v > worst) {
        worst = v;
        where = "lambda=" + std::to_string(lam);
      }
    }
    out.push_back(CheckResult::of("bias_power_rescaling", worst,
                                  std::max(tol, 1e-6), where));
  }

  // independent products: (XY)_(t) and X_(t) Y_(t) share the profile
  {
    const DistPtr y = make_beta(1.0, 1.0);
    const DistPtr prod = make_product(d, y);
    const double v = profile_distance(*size_bias(prod, t),
                                      *make_product(size_bias(d, t), size_bias(y, t)),
                                      lambdas);
    out.push_back(CheckResult::of("bias_product_rule", v, tol, ""));
  }

  return out;
}

CheckResult check_dominance(const DistPtr& d, double t,
                            const std::vector<double>& xs, double tol) {
  if (!(t >= 0.0)) throw InvalidSpec("dominance: t must be >= 0");
  const DistPtr biased = size_bias(d, t);
  double worst = -1.0;
  std::string where;
  for (double x : xs) {
    const double sb = survival(*biased, x);
    const double s0 = survival(*d, x);
    const double v = s0 - sb;
    if (v > worst) {
      worst = v;
      where = "x=" + std::to_string(x);
    }
  }
  return CheckResult::of("bias_dominance", worst, tol, where);
}

}  // namespace melt

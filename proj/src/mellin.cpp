#include "melt/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "melt/special.hpp"

namespace melt {
namespace {

constexpr double INF = std::numeric_limits<double>::infinity();

void require_in_domain(const Dist& d, double lambda) {
  if (!mellin_domain(d).contains(lambda))
    throw OutOfDomain("Mellin order " + std::to_string(lambda) +
                      " outside the finiteness strip of " +
                      std::string(variant_name(d)));
}

// log E[b_t^lambda] for the Beta(1,t) factor
double log_mellin_beta_t(double t, double lambda) {
  if (t == 0.0) return 0.0;
  return log_gamma(t + 1.0) + log_gamma(lambda + 1.0) -
         log_gamma(lambda + t + 1.0);
}

// log of int_lo^hi x^lambda dx / ((hi-lo)) for the uniform law, stable at
// lambda -> -1 when lo > 0
double log_mellin_uniform(double lo, double hi, double lambda) {
  const double q = lambda + 1.0;
  if (lo == 0.0) {
    // q > 0 guaranteed by the domain check
    return lambda * std::log(hi) - std::log(q);
  }
  const double r = std::log(hi / lo);
  double mean;  // (hi^q - lo^q) / (q (hi - lo))
  if (std::fabs(q * r) < 1e-8) {
    mean = std::exp(q * std::log(lo)) * r * (1.0 + 0.5 * q * r) / (hi - lo);
  } else {
    mean = std::exp(q * std::log(lo)) * std::expm1(q * r) / (q * (hi - lo));
  }
  return std::log(mean);
}

LogMellin grid_log_mellin(const GridSurvivalD& n, double lambda,
                          const QuadOptions& opt) {
  if (lambda == 0.0) return {0.0, 0.0, true};
  // lambda int x^{lambda-1} S(x) dx, x = e^y, support ends at the last knot
  auto f = [&](double y) {
    const double x = std::exp(y);
    if (!std::isfinite(x)) return 0.0;
    double s;
    if (x >= n.curve->x_back())
      s = 0.0;
    else
      s = (*n.curve)(x);
    if (s <= 0.0) return 0.0;
    return std::exp(lambda * y) * s;
  };
  const double hi = std::log(n.curve->x_back());
  QuadResult r = integrate_windows(f, -INF, hi, opt);
  if (!r.converged)
    throw QuadratureFailure("grid survival Mellin integral did not converge");
  const double value = lambda * r.value;
  if (!(value > 0.0))
    throw QuadratureFailure("grid survival Mellin integral not positive");
  return {std::log(value), lambda * r.abs_error / value, false};
}

}  // namespace

double log_moment(const DistPtr& d, double t) {
  return d->memo_log_moment(
      t, [&] { return log_mellin(*d, t).log_value; });
}

LogMellin log_mellin(const Dist& d, double lambda, const QuadOptions& opt) {
  require_in_domain(d, lambda);
  return std::visit(
      [&](const auto& n) -> LogMellin {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExponentialD>) {
          return {log_gamma(lambda + 1.0) - lambda * std::log(n.rate), 0.0,
                  true};
        } else if constexpr (std::is_same_v<T, GammaD>) {
          return {log_gamma(n.shape + lambda) - log_gamma(n.shape), 0.0, true};
        } else if constexpr (std::is_same_v<T, BetaD>) {
          return {log_gamma(n.a + lambda) + log_gamma(n.a + n.b) -
                      log_gamma(n.a) - log_gamma(n.a + n.b + lambda),
                  0.0, true};
        } else if constexpr (std::is_same_v<T, BetaTD>) {
          return {log_mellin_beta_t(n.t, lambda), 0.0, true};
        } else if constexpr (std::is_same_v<T, LogNormalD>) {
          return {n.mu * lambda + 0.5 * n.sigma2 * lambda * lambda, 0.0, true};
        } else if constexpr (std::is_same_v<T, UniformD>) {
          return {log_mellin_uniform(n.lo, n.hi, lambda), 0.0, true};
        } else if constexpr (std::is_same_v<T, GridSurvivalD>) {
          return grid_log_mellin(n, lambda, opt);
        } else if constexpr (std::is_same_v<T, ScaledD>) {
          LogMellin b = log_mellin(*n.base, lambda, opt);
          b.log_value += lambda * std::log(n.factor);
          return b;
        } else if constexpr (std::is_same_v<T, SizeBiasedD>) {
          const LogMellin num = log_mellin(*n.base, lambda + n.t, opt);
          const LogMellin den = log_mellin(*n.base, n.t, opt);
          return {num.log_value - den.log_value,
                  num.rel_error + den.rel_error, num.closed && den.closed};
        } else if constexpr (std::is_same_v<T, ExcessD>) {
          const LogMellin num = log_mellin(*n.base, lambda + n.t, opt);
          const LogMellin den = log_mellin(*n.base, n.t, opt);
          return {log_mellin_beta_t(n.t, lambda) + num.log_value -
                      den.log_value,
                  num.rel_error + den.rel_error, num.closed && den.closed};
        } else if constexpr (std::is_same_v<T, ProductD>) {
          const LogMellin a = log_mellin(*n.left, lambda, opt);
          const LogMellin b = log_mellin(*n.right, lambda, opt);
          return {a.log_value + b.log_value, a.rel_error + b.rel_error,
                  a.closed && b.closed};
        } else if constexpr (std::is_same_v<T, PerturbedLogNormalD>) {
          const double g =
              n.mu * lambda + 0.5 * n.sigma2 * lambda * lambda +
              std::log1p(n.eps * std::exp(-PI * PI / (2.0 * n.sigma2)) *
                         std::sin(PI * lambda));
          return {g, 0.0, true};
        } else if constexpr (std::is_same_v<T, ExpLevyD>) {
          return {levy_exponent(n.levy, lambda), 0.0, true};
        }
      },
      d.node());
}

MellinValue mellin(const Dist& d, double lambda, const QuadOptions& opt) {
  const LogMellin g = log_mellin(d, lambda, opt);
  MellinValue v;
  v.lambda = lambda;
  v.value = std::exp(g.log_value);
  v.method = g.closed ? MellinMethod::closed_form : MellinMethod::quadrature;
  const double rel = g.closed ? 1e-14 : g.rel_error + 1e-14;
  v.abs_error = v.value * rel;
  return v;
}

MellinValue mellin_via_survival(const Dist& d, double lambda,
                                const QuadOptions& opt) {
  if (!(lambda > 0.0))
    throw OutOfDomain("survival route needs a positive Mellin order");
  require_in_domain(d, lambda);
  const QuadOptions inner = inner_options(opt);
  auto f = [&](double y) {
    const double x = std::exp(y);
    if (!std::isfinite(x)) return 0.0;
    const double s = survival(d, x, inner);
    if (s <= 0.0) return 0.0;
    return std::exp(lambda * y) * s;
  };
  QuadResult r = integrate_windows(f, -INF, INF, opt);
  if (!r.converged)
    throw QuadratureFailure("survival-route Mellin did not converge");
  MellinValue v;
  v.lambda = lambda;
  v.value = lambda * r.value;
  v.abs_error = lambda * r.abs_error;
  v.method = MellinMethod::quadrature;
  return v;
}

MellinValue mellin_via_density(const Dist& d, double lambda,
                               const QuadOptions& opt) {
  require_in_domain(d, lambda);
  const QuadOptions inner = inner_options(opt);
  auto f = [&](double y) {
    const double x = std::exp(y);
    if (!std::isfinite(x) || x <= 0.0) return 0.0;
    const double fd = density(d, x, inner);
    if (fd <= 0.0) return 0.0;
    return std::exp((lambda + 1.0) * y) * fd;
  };
  QuadResult r = integrate_windows(f, -INF, INF, opt);
  if (!r.converged)
    throw QuadratureFailure("density-route Mellin did not converge");
  MellinValue v;
  v.lambda = lambda;
  v.value = r.value;
  v.abs_error = r.abs_error;
  v.method = MellinMethod::quadrature;
  return v;
}

double tail_moment(const Dist& d, double lambda, double x,
                   const QuadOptions& opt) {
  if (x <= 0.0) return mellin(d, lambda, opt).value;
  const QuadOptions inner = inner_options(opt);
  const double sx = survival(d, x, inner);
  double head = 0.0;
  if (sx > 0.0) head = std::exp(lambda * std::log(x)) * sx;
  if (lambda == 0.0) return sx;
  auto f = [&](double y) {
    const double u = std::exp(y);
    if (!std::isfinite(u)) return 0.0;
    const double s = survival(d, u, inner);
    if (s <= 0.0) return 0.0;
    return std::exp(lambda * y) * s;
  };
  QuadResult r = integrate_windows(f, std::log(x), INF, opt);
  if (!r.converged) throw QuadratureFailure("tail moment did not converge");
  return head + lambda * r.value;
}

LogMellinProfile log_mellin_profile(const Dist& d,
                                    const std::vector<double>& lambdas,
                                    const QuadOptions& opt) {
  LogMellinProfile p;
  p.lambdas = lambdas;
  p.log_values.reserve(lambdas.size());
  for (double lam : lambdas) p.log_values.push_back(log_mellin(d, lam, opt).log_value);
  return p;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw InvalidSpec("bad grid bounds");
  std::vector<double> g;
  const std::size_t n = static_cast<std::size_t>((hi - lo) / step + 1e-9) + 1;
  g.reserve(n);
  for (std::size_t i = 0; i < n; ++i) g.push_back(lo + static_cast<double>(i) * step);
  return g;
}

std::vector<double> default_lambda_grid() { return make_grid(0.25, 5.0, 0.25); }

CheckResult check_log_convexity(const LogMellinProfile& p, double tol) {
  double worst = -INF;
  std::string where;
  if (p.lambdas.size() < 3)
    throw InvalidSpec("log-convexity check needs at least three grid points");
  for (std::size_t i = 1; i + 1 < p.lambdas.size(); ++i) {
    const double la = p.lambdas[i - 1], lb = p.lambdas[i], lc = p.lambdas[i + 1];
    const double wl = (lc - lb) / (lc - la);
    const double chord = wl * p.log_values[i - 1] + (1.0 - wl) * p.log_values[i + 1];
    const double v = p.log_values[i] - chord;
    if (v > worst) {
      worst = v;
      where = "lambda=" + std::to_string(lb);
    }
  }
  return CheckResult::of("log_convexity", worst, tol, where);
}

CheckResult check_ratio_monotone(const Dist& d, double lambda,
                                 const std::vector<double>& ts, double tol) {
  if (ts.size() < 2)
    throw InvalidSpec("ratio monotonicity needs at least two t values");
  double worst = -INF;
  std::string where;
  double prev = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double g1 = log_mellin(d, ts[i] + lambda).log_value;
    const double g0 = log_mellin(d, ts[i]).log_value;
    const double r = std::exp(g1 - g0);
    if (i > 0) {
      const double v = (prev - r) / std::max(1.0, std::fabs(prev));
      if (v > worst) {
        worst = v;
        where = "t=" + std::to_string(ts[i]);
      }
    }
    prev = r;
  }
  return CheckResult::of("ratio_monotone", worst, tol, where);
}

CheckResult check_lyapunov(const Dist& d, const std::vector<double>& lambdas,
                           double tol) {
  double worst = -INF;
  std::string where;
  double prev = 0.0;
  bool first = true;
  for (double lam : lambdas) {
    if (!(lam > 0.0)) throw InvalidSpec("Lyapunov check needs positive orders");
    const double m = std::exp(log_mellin(d, lam).log_value / lam);
    if (!first) {
      const double v = (prev - m) / std::max(1.0, std::fabs(prev));
      if (v > worst) {
        worst = v;
        where = "lambda=" + std::to_string(lam);
      }
    }
    prev = m;
    first = false;
  }
  return CheckResult::of("lyapunov", worst, tol, where);
}

double mellin_distance(const Dist& a, const Dist& b,
                       const std::vector<double>& lambdas,
                       const QuadOptions& opt) {
  double dist = 0.0;
  for (double lam : lambdas) {
    const double ma = std::exp(log_mellin(a, lam, opt).log_value);
    const double mb = std::exp(log_mellin(b, lam, opt).log_value);
    dist = std::max(dist, std::fabs(ma - mb) / std::max(ma, 1.0));
  }
  return dist;
}

}  // namespace melt

#include "melt/dist.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "melt/mellin.hpp"
#include "melt/special.hpp"

namespace melt {
namespace {

constexpr double INF = std::numeric_limits<double>::infinity();

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }
bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

DistPtr make_exponential(double rate) {
  if (!finite_pos(rate)) throw InvalidSpec("exponential: rate must be > 0");
  return std::make_shared<Dist>(ExponentialD{rate});
}

DistPtr make_gamma(double shape) {
  if (!finite_pos(shape)) throw InvalidSpec("gamma: shape must be > 0");
  return std::make_shared<Dist>(GammaD{shape});
}

DistPtr make_beta(double a, double b) {
  if (!finite_pos(a) || !finite_pos(b))
    throw InvalidSpec("beta: both parameters must be > 0");
  return std::make_shared<Dist>(BetaD{a, b});
}

DistPtr make_beta_t(double t) {
  if (!finite_nonneg(t)) throw InvalidSpec("beta_t: t must be >= 0");
  return std::make_shared<Dist>(BetaTD{t});
}

DistPtr make_log_normal(double mu, double sigma2) {
  if (!std::isfinite(mu) || !finite_nonneg(sigma2))
    throw InvalidSpec("log_normal: need finite mu and sigma2 >= 0");
  return std::make_shared<Dist>(LogNormalD{mu, sigma2});
}

DistPtr make_uniform(double lo, double hi) {
  if (!finite_nonneg(lo) || !std::isfinite(hi) || !(lo < hi))
    throw InvalidSpec("uniform: need 0 <= lo < hi");
  return std::make_shared<Dist>(UniformD{lo, hi});
}

DistPtr make_grid_survival(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2)
    throw InvalidSpec("grid_survival: need at least two knots");
  std::vector<double> x, s;
  x.reserve(points.size());
  s.reserve(points.size());
  for (const auto& [xi, si] : points) {
    if (!finite_nonneg(xi) || !std::isfinite(si) || si < 0.0 || si > 1.0)
      throw InvalidSpec("grid_survival: knots need x >= 0 and S in [0,1]");
    if (!x.empty()) {
      if (!(xi > x.back()))
        throw InvalidSpec("grid_survival: x must be strictly increasing");
      if (si > s.back() + 1e-12)
        throw InvalidSpec("grid_survival: S must be nonincreasing");
    }
    x.push_back(xi);
    s.push_back(std::min(si, s.empty() ? 1.0 : s.back()));
  }
  auto curve = std::make_shared<MonotoneCubic>(std::move(x), std::move(s));
  return std::make_shared<Dist>(GridSurvivalD{std::move(curve)});
}

DistPtr make_scaled(DistPtr base, double factor) {
  if (!base) throw InvalidSpec("scaled: missing base");
  if (!finite_pos(factor)) throw InvalidSpec("scaled: factor must be > 0");
  return std::make_shared<Dist>(ScaledD{std::move(base), factor});
}

DistPtr make_size_biased_node(DistPtr base, double t) {
  if (!base) throw InvalidSpec("size_biased: missing base");
  if (!std::isfinite(t) || t < 0.0)
    throw InvalidSpec("size_biased: t must be >= 0");
  if (t == 0.0) return base;
  if (!mellin_domain(*base).contains(t))
    throw OutOfDomain("size_biased: t outside the base Mellin strip");
  return std::make_shared<Dist>(SizeBiasedD{std::move(base), t});
}

DistPtr make_excess_node(DistPtr base, double t) {
  if (!base) throw InvalidSpec("excess: missing base");
  if (!std::isfinite(t) || t < 0.0) throw InvalidSpec("excess: t must be >= 0");
  if (t == 0.0) return base;
  if (!mellin_domain(*base).contains(t))
    throw OutOfDomain("excess: t outside the base Mellin strip");
  return std::make_shared<Dist>(ExcessD{std::move(base), t});
}

DistPtr make_product(DistPtr left, DistPtr right) {
  if (!left || !right) throw InvalidSpec("product_indep: missing factor");
  return std::make_shared<Dist>(ProductD{std::move(left), std::move(right)});
}

DistPtr make_perturbed_log_normal(double mu, double sigma2, double eps) {
  if (!std::isfinite(mu) || !finite_pos(sigma2))
    throw InvalidSpec("perturbed_log_normal: need finite mu and sigma2 > 0");
  if (!std::isfinite(eps) || eps < 0.0 || eps >= 1.0)
    throw InvalidSpec("perturbed_log_normal: eps must be in [0,1)");
  return std::make_shared<Dist>(PerturbedLogNormalD{mu, sigma2, eps});
}

DistPtr make_exp_levy(LevySpec levy) {
  validate(levy);
  return std::make_shared<Dist>(ExpLevyD{std::move(levy)});
}

DistPtr make_point_mass(double value) {
  if (!finite_pos(value)) throw InvalidSpec("point mass: value must be > 0");
  return make_log_normal(std::log(value), 0.0);
}

std::string_view variant_name(const Dist& d) {
  return std::visit(
      [](const auto& n) -> std::string_view {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExponentialD>) return "exponential";
        if constexpr (std::is_same_v<T, GammaD>) return "gamma";
        if constexpr (std::is_same_v<T, BetaD>) return "beta";
        if constexpr (std::is_same_v<T, BetaTD>) return "beta_t";
        if constexpr (std::is_same_v<T, LogNormalD>) return "log_normal";
        if constexpr (std::is_same_v<T, UniformD>) return "uniform";
        if constexpr (std::is_same_v<T, GridSurvivalD>) return "grid_survival";
        if constexpr (std::is_same_v<T, ScaledD>) return "scaled";
        if constexpr (std::is_same_v<T, SizeBiasedD>) return "size_biased";
        if constexpr (std::is_same_v<T, ExcessD>) return "excess";
        if constexpr (std::is_same_v<T, ProductD>) return "product_indep";
        if constexpr (std::is_same_v<T, PerturbedLogNormalD>)
          return "perturbed_log_normal";
        if constexpr (std::is_same_v<T, ExpLevyD>) return "exp_levy";
      },
      d.node());
}

bool is_point_mass(const Dist& d, double* value) {
  if (const auto* ln = d.get_if<LogNormalD>()) {
    if (ln->sigma2 == 0.0) {
      if (value) *value = std::exp(ln->mu);
      return true;
    }
    return false;
  }
  if (const auto* bt = d.get_if<BetaTD>()) {
    if (bt->t == 0.0) {
      if (value) *value = 1.0;
      return true;
    }
    return false;
  }
  if (const auto* sc = d.get_if<ScaledD>()) {
    double v;
    if (is_point_mass(*sc->base, &v)) {
      if (value) *value = sc->factor * v;
      return true;
    }
    return false;
  }
  if (const auto* pr = d.get_if<ProductD>()) {
    double a, b;
    if (is_point_mass(*pr->left, &a) && is_point_mass(*pr->right, &b)) {
      if (value) *value = a * b;
      return true;
    }
    return false;
  }
  if (const auto* lv = d.get_if<ExpLevyD>()) {
    if (lv->levy.sigma2 == 0.0 && lv->levy.jumps.kind == JumpKind::none) {
      if (value) *value = std::exp(lv->levy.d);
      return true;
    }
    return false;
  }
  return false;
}

DistPtr scale(const DistPtr& d, double k) {
  if (!d) throw InvalidSpec("scale: missing spec");
  if (!std::isfinite(k) || k <= 0.0) throw InvalidSpec("scale: k must be > 0");
  if (k == 1.0) return d;
  if (const auto* e = d->get_if<ExponentialD>())
    return make_exponential(e->rate / k);
  if (const auto* u = d->get_if<UniformD>())
    return make_uniform(k * u->lo, k * u->hi);
  if (const auto* ln = d->get_if<LogNormalD>())
    return make_log_normal(ln->mu + std::log(k), ln->sigma2);
  if (const auto* sc = d->get_if<ScaledD>()) return scale(sc->base, k * sc->factor);
  if (const auto* g = d->get_if<GridSurvivalD>()) {
    std::vector<std::pair<double, double>> pts;
    const auto& xs = g->curve->xs();
    const auto& ys = g->curve->ys();
    pts.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(k * xs[i], ys[i]);
    return make_grid_survival(std::move(pts));
  }
  if (const auto* lv = d->get_if<ExpLevyD>()) {
    LevySpec s = lv->levy;
    s.d += std::log(k);
    return make_exp_levy(std::move(s));
  }
  return make_scaled(d, k);
}

MellinDomain mellin_domain(const Dist& d) {
  return std::visit(
      [&](const auto& n) -> MellinDomain {
        using T = std::decay_t<decltype(n)>;
        MellinDomain m;  // defaults to (-inf, inf) open
        if constexpr (std::is_same_v<T, ExponentialD>) {
          m.lo = -1.0;
        } else if constexpr (std::is_same_v<T, GammaD>) {
          m.lo = -n.shape;
        } else if constexpr (std::is_same_v<T, BetaD>) {
          m.lo = -n.a;
        } else if constexpr (std::is_same_v<T, BetaTD>) {
          if (n.t > 0.0) m.lo = -1.0;
        } else if constexpr (std::is_same_v<T, LogNormalD>) {
          (void)n;
        } else if constexpr (std::is_same_v<T, UniformD>) {
          if (n.lo == 0.0) m.lo = -1.0;
        } else if constexpr (std::is_same_v<T, GridSurvivalD>) {
          // knot data cannot rule out mass near 0, so negative orders are out
          m.lo = 0.0;
          m.lo_included = true;
        } else if constexpr (std::is_same_v<T, ScaledD>) {
          m = mellin_domain(*n.base);
        } else if constexpr (std::is_same_v<T, SizeBiasedD>) {
          m = mellin_domain(*n.base);
          m.lo -= n.t;
          if (std::isfinite(m.hi)) m.hi -= n.t;
        } else if constexpr (std::is_same_v<T, ExcessD>) {
          m = mellin_domain(*n.base);
          m.lo -= n.t;
          if (std::isfinite(m.hi)) m.hi -= n.t;
          if (m.lo < -1.0) {
            m.lo = -1.0;
            m.lo_included = false;
          }
        } else if constexpr (std::is_same_v<T, ProductD>) {
          const MellinDomain a = mellin_domain(*n.left);
          const MellinDomain b = mellin_domain(*n.right);
          m = a;
          if (b.lo > m.lo) {
            m.lo = b.lo;
            m.lo_included = b.lo_included;
          } else if (b.lo == m.lo) {
            m.lo_included = m.lo_included && b.lo_included;
          }
          if (b.hi < m.hi) {
            m.hi = b.hi;
            m.hi_included = b.hi_included;
          } else if (b.hi == m.hi) {
            m.hi_included = m.hi_included && b.hi_included;
          }
        } else if constexpr (std::is_same_v<T, PerturbedLogNormalD>) {
          (void)n;
        } else if constexpr (std::is_same_v<T, ExpLevyD>) {
          m.lo = levy_lambda_lower(n.levy);
        }
        return m;
      },
      d.node());
}

namespace {

// tail integral int_x^inf u^{p} S(u) du as int_{ln x}^inf e^{(p+1) y} S(e^y) dy
double survival_tail_integral(const Dist& d, double p, double x,
                              const QuadOptions& opt) {
  const QuadOptions inner = inner_options(opt);
  auto f = [&](double y) {
    const double u = std::exp(y);
    if (!std::isfinite(u)) return 0.0;
    const double s = survival(d, u, inner);
    if (s <= 0.0) return 0.0;
    return std::exp((p + 1.0) * y) * s;
  };
  const double lo = x > 0.0 ? std::log(x) : -INF;
  return integrate_or_throw(f, lo, INF, opt, "survival tail integral");
}

double size_biased_survival(const SizeBiasedD& n, double x,
                            const QuadOptions& opt) {
  const double log_denom = log_moment(n.base, n.t);
  if (x <= 0.0) return 1.0;
  const double sx = survival(*n.base, x, opt);
  const double head = sx > 0.0 ? std::pow(x, n.t) * sx : 0.0;
  const double tail = n.t * survival_tail_integral(*n.base, n.t - 1.0, x, opt);
  const double v = (head + tail) * std::exp(-log_denom);
  return std::min(1.0, std::max(0.0, v));
}

// E[(X - x)_+^t] via w = (u - x)^t, so the integrand is S(x + w^{1/t})
double excess_numerator(const Dist& base, double t, double x,
                        const QuadOptions& opt) {
  const double inv_t = 1.0 / t;
  const QuadOptions inner = inner_options(opt);
  auto f = [&](double z) {
    // w = e^z keeps the doubling windows on the whole line
    const double w = std::exp(z);
    if (!std::isfinite(w)) return 0.0;
    const double u = x + std::pow(w, inv_t);
    if (!std::isfinite(u)) return 0.0;
    const double s = survival(base, u, inner);
    if (s <= 0.0) return 0.0;
    return w * s;
  };
  return integrate_or_throw(f, -INF, INF, opt, "excess tail moment");
}

double excess_survival(const ExcessD& n, double x, const QuadOptions& opt) {
  if (x <= 0.0) return 1.0;
  const double log_denom = log_moment(n.base, n.t);
  const double v = excess_numerator(*n.base, n.t, x, opt) * std::exp(-log_denom);
  return std::min(1.0, std::max(0.0, v));
}

double product_survival(const ProductD& n, double x, const QuadOptions& opt) {
  if (x <= 0.0) return 1.0;
  double v;
  if (is_point_mass(*n.right, &v)) return survival(*n.left, x / v, opt);
  if (is_point_mass(*n.left, &v)) return survival(*n.right, x / v, opt);

  const Dist* dens_side = nullptr;
  const Dist* other = nullptr;
  if (has_density(*n.right)) {
    dens_side = n.right.get();
    other = n.left.get();
  } else if (has_density(*n.left)) {
    dens_side = n.left.get();
    other = n.right.get();
  } else {
    throw QuadratureFailure(
        "product survival: neither factor has a density or is degenerate");
  }
  // P(UV > x) = int S_U(x/v) f_V(v) dv over v = e^y
  const QuadOptions inner = inner_options(opt);
  auto f = [&](double y) {
    const double v2 = std::exp(y);
    if (!std::isfinite(v2) || v2 <= 0.0) return 0.0;
    const double fd = density(*dens_side, v2, inner);
    if (fd <= 0.0) return 0.0;
    const double s = survival(*other, x / v2, inner);
    if (s <= 0.0) return 0.0;
    return v2 * fd * s;
  };
  const double val = integrate_or_throw(f, -INF, INF, opt, "product survival");
  return std::min(1.0, std::max(0.0, val));
}

double perturbed_survival(const PerturbedLogNormalD& n, double x,
                          const QuadOptions& opt) {
  const double sigma = std::sqrt(n.sigma2);
  if (x <= 0.0) return 1.0;
  const double z = (std::log(x) - n.mu) / sigma;
  const double base = normal_survival(z);
  if (n.eps == 0.0) return base;
  auto f = [&](double y) {
    const double u = (y - n.mu) / sigma;
    return normal_pdf(u) / sigma * std::sin(PI * (y - n.mu) / n.sigma2);
  };
  const double corr = integrate_or_throw(f, std::log(x), INF, opt,
                                         "perturbed log-normal survival");
  return std::min(1.0, std::max(0.0, base + n.eps * corr));
}

}  // namespace

double survival(const Dist& d, double x, const QuadOptions& opt) {
  if (x < 0.0) return 1.0;
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExponentialD>) {
          return std::exp(-n.rate * x);
        } else if constexpr (std::is_same_v<T, GammaD>) {
          return gamma_q(n.shape, x);
        } else if constexpr (std::is_same_v<T, BetaD>) {
          return beta_survival(n.a, n.b, x);
        } else if constexpr (std::is_same_v<T, BetaTD>) {
          if (n.t == 0.0) return x < 1.0 ? 1.0 : 0.0;
          if (x >= 1.0) return 0.0;
          if (x <= 0.0) return 1.0;
          return std::exp(n.t * std::log1p(-x));
        } else if constexpr (std::is_same_v<T, LogNormalD>) {
          if (n.sigma2 == 0.0) return x < std::exp(n.mu) ? 1.0 : 0.0;
          if (x <= 0.0) return 1.0;
          return normal_survival((std::log(x) - n.mu) / std::sqrt(n.sigma2));
        } else if constexpr (std::is_same_v<T, UniformD>) {
          if (x <= n.lo) return 1.0;
          if (x >= n.hi) return 0.0;
          return (n.hi - x) / (n.hi - n.lo);
        } else if constexpr (std::is_same_v<T, GridSurvivalD>) {
          if (x >= n.curve->x_back()) return 0.0;
          return (*n.curve)(x);
        } else if constexpr (std::is_same_v<T, ScaledD>) {
          return survival(*n.base, x / n.factor, opt);
        } else if constexpr (std::is_same_v<T, SizeBiasedD>) {
          return size_biased_survival(n, x, opt);
        } else if constexpr (std::is_same_v<T, ExcessD>) {
          return excess_survival(n, x, opt);
        } else if constexpr (std::is_same_v<T, ProductD>) {
          return product_survival(n, x, opt);
        } else if constexpr (std::is_same_v<T, PerturbedLogNormalD>) {
          return perturbed_survival(n, x, opt);
        } else if constexpr (std::is_same_v<T, ExpLevyD>) {
          if (x <= 0.0) return 1.0;
          return levy_log_price_survival(n.levy, std::log(x));
        }
      },
      d.node());
}

bool has_density(const Dist& d) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExponentialD> ||
                      std::is_same_v<T, GammaD> || std::is_same_v<T, BetaD> ||
                      std::is_same_v<T, UniformD> ||
                      std::is_same_v<T, PerturbedLogNormalD>) {
          return true;
        } else if constexpr (std::is_same_v<T, BetaTD>) {
          return n.t > 0.0;
        } else if constexpr (std::is_same_v<T, LogNormalD>) {
          return n.sigma2 > 0.0;
        } else if constexpr (std::is_same_v<T, GridSurvivalD>) {
          return false;
        } else if constexpr (std::is_same_v<T, ScaledD>) {
          return has_density(*n.base);
        } else if constexpr (std::is_same_v<T, SizeBiasedD>) {
          return has_density(*n.base);
        } else if constexpr (std::is_same_v<T, ExcessD>) {
          return n.t >= 1.0;
        } else if constexpr (std::is_same_v<T, ProductD>) {
          double v;
          if (is_point_mass(*n.left, &v)) return has_density(*n.right);
          if (is_point_mass(*n.right, &v)) return has_density(*n.left);
          return has_density(*n.left) && has_density(*n.right);
        } else if constexpr (std::is_same_v<T, ExpLevyD>) {
          return levy_log_price_has_density(n.levy);
        }
      },
      d.node());
}

double density(const Dist& d, double x, const QuadOptions& opt) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExponentialD>) {
          return x < 0.0 ? 0.0 : n.rate * std::exp(-n.rate * x);
        } else if constexpr (std::is_same_v<T, GammaD>) {
          if (x <= 0.0) return 0.0;
          return std::exp((n.shape - 1.0) * std::log(x) - x -
                          log_gamma(n.shape));
        } else if constexpr (std::is_same_v<T, BetaD>) {
          if (x <= 0.0 || x >= 1.0) return 0.0;
          return std::exp((n.a - 1.0) * std::log(x) +
                          (n.b - 1.0) * std::log1p(-x) - log_beta(n.a, n.b));
        } else if constexpr (std::is_same_v<T, BetaTD>) {
          if (n.t == 0.0)
            throw DensityUnavailable("beta_t: t = 0 is a point mass");
          if (x < 0.0 || x >= 1.0) return 0.0;
          return n.t * std::exp((n.t - 1.0) * std::log1p(-x));
        } else if constexpr (std::is_same_v<T, LogNormalD>) {
          if (n.sigma2 == 0.0)
            throw DensityUnavailable("log_normal: sigma2 = 0 is a point mass");
          if (x <= 0.0) return 0.0;
          const double sigma = std::sqrt(n.sigma2);
          return normal_pdf((std::log(x) - n.mu) / sigma) / (sigma * x);
        } else if constexpr (std::is_same_v<T, UniformD>) {
          return (x <= n.lo || x >= n.hi) ? 0.0 : 1.0 / (n.hi - n.lo);
        } else if constexpr (std::is_same_v<T, GridSurvivalD>) {
          throw DensityUnavailable("grid_survival: knot data has no density");
        } else if constexpr (std::is_same_v<T, ScaledD>) {
          return density(*n.base, x / n.factor, opt) / n.factor;
        } else if constexpr (std::is_same_v<T, SizeBiasedD>) {
          if (x <= 0.0) return 0.0;
          const double f = density(*n.base, x, opt);
          if (f <= 0.0) return 0.0;
          return std::exp(n.t * std::log(x) - log_moment(n.base, n.t)) * f;
        } else if constexpr (std::is_same_v<T, ExcessD>) {
          // t E[(X-x)_+^{t-1}] / E[X^t]; needs t >= 1
          if (n.t < 1.0)
            throw DensityUnavailable(
                "excess: density route needs order t >= 1");
          if (x < 0.0) return 0.0;
          const double log_denom = log_moment(n.base, n.t);
          double num;
          if (n.t == 1.0)
            num = survival(*n.base, x, opt);
          else
            num = excess_numerator(*n.base, n.t - 1.0, x, opt);
          return n.t * num * std::exp(-log_denom);
        } else if constexpr (std::is_same_v<T, ProductD>) {
          double v;
          if (is_point_mass(*n.right, &v))
            return density(*n.left, x / v, opt) / v;
          if (is_point_mass(*n.left, &v))
            return density(*n.right, x / v, opt) / v;
          if (!has_density(*n.left) || !has_density(*n.right))
            throw DensityUnavailable(
                "product_indep: need a density on both factors or a "
                "degenerate factor");
          if (x <= 0.0) return 0.0;
          // Mellin convolution int f_U(x/v) f_V(v) dv/v over v = e^y
          const QuadOptions inner = inner_options(opt);
          auto f = [&](double y) {
            const double v2 = std::exp(y);
            if (!std::isfinite(v2) || v2 <= 0.0) return 0.0;
            const double fr = density(*n.right, v2, inner);
            if (fr <= 0.0) return 0.0;
            const double fl = density(*n.left, x / v2, inner);
            if (fl <= 0.0) return 0.0;
            return fl * fr;
          };
          return integrate_or_throw(f, -INF, INF, opt, "product density");
        } else if constexpr (std::is_same_v<T, PerturbedLogNormalD>) {
          if (x <= 0.0) return 0.0;
          const double sigma = std::sqrt(n.sigma2);
          const double base =
              normal_pdf((std::log(x) - n.mu) / sigma) / (sigma * x);
          return base *
                 (1.0 + n.eps * std::sin(PI * (std::log(x) - n.mu) / n.sigma2));
        } else if constexpr (std::is_same_v<T, ExpLevyD>) {
          if (!levy_log_price_has_density(n.levy))
            throw DensityUnavailable("exp_levy: law has an atom");
          if (x <= 0.0) return 0.0;
          return levy_log_price_density(n.levy, std::log(x)) / x;
        }
      },
      d.node());
}

}  // namespace melt

#include "melt/levy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "melt/errors.hpp"
#include "melt/quadrature.hpp"
#include "melt/special.hpp"

namespace melt {
namespace {

constexpr double INF = std::numeric_limits<double>::infinity();

// int_0^1 x e^{-c x} dx = (1 - e^{-c}(1+c)) / c^2
double int01_x_exp(double c) {
  if (std::fabs(c) < 1e-6) return 0.5 - c / 3.0 + c * c / 8.0;
  return (1.0 - std::exp(-c) * (1.0 + c)) / (c * c);
}

double jump_exponent(const LevyJumps& j, double lambda) {
  switch (j.kind) {
    case JumpKind::none:
      return 0.0;
    case JumpKind::compound_poisson: {
      const double beta = 1.0 / j.jump_mean;
      // int (e^{-lambda x} - 1) pi(dx) + lambda int_{x<=1} x pi(dx)
      const double base = j.rate * (beta / (lambda + beta) - 1.0);
      const double comp = lambda * j.rate * beta * int01_x_exp(beta);
      return base + comp;
    }
    case JumpKind::finite_atoms: {
      double v = 0.0;
      for (const auto& [w, x] : j.atoms) {
        double term = std::expm1(-lambda * x);
        if (x <= 1.0) term += lambda * x;
        v += w * term;
      }
      return v;
    }
  }
  return 0.0;
}

// truncated Poisson pmf row e^{-L} L^k / k!, returned up to a tail < 1e-15
std::vector<double> poisson_row(double intensity) {
  std::vector<double> p;
  double term = std::exp(-intensity);
  double acc = term;
  p.push_back(term);
  for (int k = 1; k < 4096; ++k) {
    term *= intensity / k;
    p.push_back(term);
    acc += term;
    if (1.0 - acc < 1e-15 && k > intensity) break;
  }
  return p;
}

// continuous part of the compound-Poisson(1/m jumps) subordinator density at
// g > 0: e^{-L - beta g} beta sum_k (L beta g)^{k-1} L / (k! (k-1)!)
double cp_subordinator_density(double intensity, double beta, double g) {
  if (g <= 0.0) return 0.0;
  const double z = intensity * beta * g;
  double term = intensity * beta;  // k = 1
  double sum = term;
  for (int k = 1; k < 512; ++k) {
    term *= z / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (term < sum * 1e-16) break;
  }
  return std::exp(-intensity - beta * g) * sum;
}

// (probability, total jump size) states of the finite-atoms subordinator:
// each atom is an independent Poisson stream, so the state list is the
// product of per-atom Poisson pmfs; probabilities below 1e-14 are dropped
std::vector<std::pair<double, double>> atom_states(const LevyJumps& j) {
  std::vector<std::pair<double, double>> acc{{1.0, 0.0}};
  for (const auto& [w, x] : j.atoms) {
    std::vector<double> row = poisson_row(w);
    std::vector<std::pair<double, double>> next;
    next.reserve(acc.size() * row.size());
    for (const auto& [p, v] : acc)
      for (std::size_t k = 0; k < row.size(); ++k) {
        const double pk = p * row[k];
        if (pk < 1e-14) continue;
        next.emplace_back(pk, v + static_cast<double>(k) * x);
      }
    acc.swap(next);
    if (acc.size() > 200000)
      throw QuadratureFailure("finite-atom jump enumeration too large");
  }
  return acc;
}

}  // namespace

void validate(const LevySpec& s) {
  if (!std::isfinite(s.d) || !std::isfinite(s.sigma2) || s.sigma2 < 0.0)
    throw InvalidSpec("levy: need finite drift and sigma2 >= 0");
  switch (s.jumps.kind) {
    case JumpKind::none:
      break;
    case JumpKind::compound_poisson:
      if (!(s.jumps.rate > 0.0) || !(s.jumps.jump_mean > 0.0))
        throw InvalidSpec("levy: compound Poisson needs rate > 0, mean > 0");
      break;
    case JumpKind::finite_atoms:
      if (s.jumps.atoms.empty())
        throw InvalidSpec("levy: finite_atoms needs at least one atom");
      for (const auto& [w, x] : s.jumps.atoms)
        if (!(w > 0.0) || !(x > 0.0) || !std::isfinite(w) || !std::isfinite(x))
          throw InvalidSpec("levy: atoms need positive mass and location");
      break;
  }
}

double levy_lambda_lower(const LevySpec& s) {
  if (s.jumps.kind == JumpKind::compound_poisson) return -1.0 / s.jumps.jump_mean;
  return -INF;
}

double levy_exponent(const LevySpec& s, double lambda) {
  if (s.jumps.kind == JumpKind::compound_poisson &&
      lambda <= levy_lambda_lower(s))
    throw OutOfDomain("levy exponent: order at or below -1/jump_mean");
  return s.d * lambda + 0.5 * s.sigma2 * lambda * lambda +
         jump_exponent(s.jumps, lambda);
}

double levy_delta(const LevySpec& s, double t, double s_step) {
  double jump = 0.0;
  switch (s.jumps.kind) {
    case JumpKind::none:
      break;
    case JumpKind::compound_poisson: {
      const double beta = 1.0 / s.jumps.jump_mean;
      const double rb = s.jumps.rate * beta;
      jump = rb * (1.0 / (t + beta) - 1.0 / (t + 1.0 + beta) -
                   1.0 / (t + s_step + beta) + 1.0 / (t + 1.0 + s_step + beta));
      break;
    }
    case JumpKind::finite_atoms: {
      for (const auto& [w, x] : s.jumps.atoms)
        jump += w * std::exp(-t * x) * (-std::expm1(-x)) * (-std::expm1(-s_step * x));
      break;
    }
  }
  return s.sigma2 * s_step + jump;
}

LevySpec levy_tilt(const LevySpec& s, double t) {
  if (!(t >= 0.0)) throw InvalidSpec("levy tilt: t must be >= 0");
  LevySpec out = s;
  out.d = s.d + s.sigma2 * t;
  switch (s.jumps.kind) {
    case JumpKind::none:
      break;
    case JumpKind::compound_poisson: {
      const double beta = 1.0 / s.jumps.jump_mean;
      // compensator correction int_0^1 x (1 - e^{-t x}) pi(dx)
      out.d += s.jumps.rate * beta * (int01_x_exp(beta) - int01_x_exp(beta + t));
      out.jumps.rate = s.jumps.rate * beta / (beta + t);
      out.jumps.jump_mean = 1.0 / (beta + t);
      break;
    }
    case JumpKind::finite_atoms: {
      for (auto& [w, x] : out.jumps.atoms) {
        if (x <= 1.0) out.d += w * x * (-std::expm1(-t * x));
        w *= std::exp(-t * x);
      }
      break;
    }
  }
  return out;
}

double levy_sampler_drift(const LevySpec& s) {
  double dd = s.d;
  switch (s.jumps.kind) {
    case JumpKind::none:
      break;
    case JumpKind::compound_poisson: {
      const double beta = 1.0 / s.jumps.jump_mean;
      dd += s.jumps.rate * beta * int01_x_exp(beta);
      break;
    }
    case JumpKind::finite_atoms:
      for (const auto& [w, x] : s.jumps.atoms)
        if (x <= 1.0) dd += w * x;
      break;
  }
  return dd;
}

double levy_total_rate(const LevySpec& s) {
  switch (s.jumps.kind) {
    case JumpKind::none:
      return 0.0;
    case JumpKind::compound_poisson:
      return s.jumps.rate;
    case JumpKind::finite_atoms: {
      double r = 0.0;
      for (const auto& [w, x] : s.jumps.atoms) r += w;
      return r;
    }
  }
  return 0.0;
}

bool levy_log_price_has_density(const LevySpec& s) {
  if (s.sigma2 > 0.0) return true;
  return false;
}

double levy_log_price_survival(const LevySpec& s, double y) {
  const double drift = levy_sampler_drift(s);
  const double sigma = std::sqrt(s.sigma2);

  auto gauss_tail = [&](double shift) {
    // P(drift + sigma N - shift > y)
    if (sigma > 0.0) return normal_survival((y - drift + shift) / sigma);
    return (drift - shift > y) ? 1.0 : 0.0;
  };

  switch (s.jumps.kind) {
    case JumpKind::none:
      return gauss_tail(0.0);
    case JumpKind::compound_poisson: {
      const double intensity = s.jumps.rate;
      const double beta = 1.0 / s.jumps.jump_mean;
      const double atom = std::exp(-intensity) * gauss_tail(0.0);
      if (sigma > 0.0) {
        auto f = [&](double g) {
          return gauss_tail(g) * cp_subordinator_density(intensity, beta, g);
        };
        QuadOptions opt;
        const double val = integrate_or_throw(f, 0.0, INF, opt,
                                              "levy survival mixture");
        return std::min(1.0, std::max(0.0, atom + val));
      }
      // sigma = 0: indicator collapses the mixture to a subordinator CDF
      const double cut = drift - y;
      if (cut <= 0.0) return 0.0;
      auto f = [&](double g) {
        return cp_subordinator_density(intensity, beta, g);
      };
      QuadOptions opt;
      const double val =
          integrate_or_throw(f, 0.0, cut, opt, "levy survival cdf");
      return std::min(1.0, std::max(0.0, atom + val));
    }
    case JumpKind::finite_atoms: {
      double v = 0.0;
      for (const auto& [p, g] : atom_states(s.jumps)) v += p * gauss_tail(g);
      return std::min(1.0, std::max(0.0, v));
    }
  }
  return 0.0;
}

double levy_log_price_density(const LevySpec& s, double y) {
  if (!levy_log_price_has_density(s))
    throw DensityUnavailable("levy log price: sigma2 = 0 law has an atom");
  const double drift = levy_sampler_drift(s);
  const double sigma = std::sqrt(s.sigma2);
  auto gauss_pdf = [&](double shift) {
    return normal_pdf((y - drift + shift) / sigma) / sigma;
  };
  switch (s.jumps.kind) {
    case JumpKind::none:
      return gauss_pdf(0.0);
    case JumpKind::compound_poisson: {
      const double intensity = s.jumps.rate;
      const double beta = 1.0 / s.jumps.jump_mean;
      const double atom = std::exp(-intensity) * gauss_pdf(0.0);
      auto f = [&](double g) {
        return gauss_pdf(g) * cp_subordinator_density(intensity, beta, g);
      };
      QuadOptions opt;
      return atom + integrate_or_throw(f, 0.0, INF, opt, "levy density mixture");
    }
    case JumpKind::finite_atoms: {
      double v = 0.0;
      for (const auto& [p, g] : atom_states(s.jumps)) v += p * gauss_pdf(g);
      return v;
    }
  }
  return 0.0;
}

DistPtr dist_from_levy(const LevySpec& s) { return make_exp_levy(s); }

CheckResult check_levy_delta(const LevySpec& s, const std::vector<double>& ts,
                             const std::vector<double>& ss, double tol) {
  double worst = -INF;
  std::string where;
  for (double t : ts)
    for (double sp : ss) {
      const double closed = levy_delta(s, t, sp);
      const double diffs = levy_exponent(s, t + 1.0 + sp) -
                           levy_exponent(s, t + 1.0) -
                           levy_exponent(s, t + sp) + levy_exponent(s, t);
      const double v = std::fabs(closed - diffs) /
                       std::max(1.0, std::fabs(closed));
      if (v > worst) {
        worst = v;
        where = "t=" + std::to_string(t) + " s=" + std::to_string(sp);
      }
    }
  return CheckResult::of("levy_delta_closed_form", worst, tol, where);
}

CheckResult check_levy_gprime_concave(const LevySpec& s,
                                      const std::vector<double>& lambdas,
                                      double tol) {
  // slopes of g on consecutive intervals must be concave in the midpoint grid
  if (lambdas.size() < 4)
    throw InvalidSpec("g' concavity needs at least four grid points");
  std::vector<double> slope;
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i) {
    const double h = lambdas[i + 1] - lambdas[i];
    slope.push_back(
        (levy_exponent(s, lambdas[i + 1]) - levy_exponent(s, lambdas[i])) / h);
  }
  double worst = -INF;
  std::string where;
  for (std::size_t i = 1; i + 1 < slope.size(); ++i) {
    const double v = slope[i + 1] - 2.0 * slope[i] + slope[i - 1];
    if (v > worst) {
      worst = v;
      where = "lambda~" + std::to_string(lambdas[i + 1]);
    }
  }
  return CheckResult::of("levy_gprime_concave", worst, tol, where);
}

CheckResult check_levy_ratio_limit(const LevySpec& s, double s_step,
                                   const std::vector<double>& ts, double tol) {
  // exp(D1 Ds g(t)) >= 1, nonincreasing in t, gap to e^{sigma2 s} -> 0
  double worst = -INF;
  std::string where;
  double prev = INF;
  const double floor_log = s.sigma2 * s_step;
  for (double t : ts) {
    const double d = levy_delta(s, t, s_step);
    double v = floor_log - d;  // must stay <= 0 (ratio above the limit)
    if (v > worst) {
      worst = v;
      where = "t=" + std::to_string(t) + " (below limit)";
    }
    v = d - prev;  // must be nonincreasing
    if (v > worst) {
      worst = v;
      where = "t=" + std::to_string(t) + " (not decreasing)";
    }
    prev = d;
  }
  const double gap = levy_delta(s, ts.back(), s_step) - floor_log;
  if (gap > worst) {
    worst = gap;
    where = "final gap to exp(sigma2 s)";
  }
  return CheckResult::of("levy_ratio_limit", worst, tol, where);
}

CheckResult check_levy_rate_symmetry(const LevySpec& s, double t, double s_step,
                                     double mu_step, double tol) {
  const double lhs = std::exp(mu_step * levy_delta(s, t, s_step));
  const double rhs = std::exp(s_step * levy_delta(s, t, mu_step));
  const double v = std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
  return CheckResult::of("levy_rate_symmetry", v, tol,
                         "t=" + std::to_string(t));
}

}  // namespace melt

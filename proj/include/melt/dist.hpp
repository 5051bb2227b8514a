#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "melt/errors.hpp"
#include "melt/grid_interp.hpp"
#include "melt/levy_spec.hpp"
#include "melt/quadrature.hpp"

namespace melt {

class Dist;
using DistPtr = std::shared_ptr<const Dist>;

struct ExponentialD {
  double rate;
};
struct GammaD {
  double shape;
};
struct BetaD {
  double a, b;
};
// Beta(1,t) with the t = 0 degenerate case meaning the point mass at 1
struct BetaTD {
  double t;
};
// sigma2 = 0 means the point mass at e^mu
struct LogNormalD {
  double mu, sigma2;
};
struct UniformD {
  double lo, hi;
};
// survival data on knots; monotone cubic between knots, constant left of the
// first knot, zero at and beyond the last (any residual knot mass becomes an
// atom there)
struct GridSurvivalD {
  std::shared_ptr<const MonotoneCubic> curve;
};
struct ScaledD {
  DistPtr base;
  double factor;
};
// generic x^t-weighted law; closed-form promotions live in size_bias()
struct SizeBiasedD {
  DistPtr base;
  double t;
};
// stationary-excess law of order t (t > 0 after normalization)
struct ExcessD {
  DistPtr base;
  double t;
};
struct ProductD {
  DistPtr left, right;
};
// log-normal density times (1 + eps sin(pi (ln x - mu)/sigma2)): same integer
// moments as the log-normal for every eps in [0,1)
struct PerturbedLogNormalD {
  double mu, sigma2, eps;
};
// X = e^L for the spectrally negative Levy model
struct ExpLevyD {
  LevySpec levy;
};

using DistNode =
    std::variant<ExponentialD, GammaD, BetaD, BetaTD, LogNormalD, UniformD,
                 GridSurvivalD, ScaledD, SizeBiasedD, ExcessD, ProductD,
                 PerturbedLogNormalD, ExpLevyD>;

// Immutable node in a distribution expression graph. Shared freely; the only
// mutable state is a guarded memo of log-moments used by wrapper nodes.
class Dist {
 public:
  explicit Dist(DistNode node) : node_(std::move(node)) {}

  const DistNode& node() const { return node_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&node_);
  }

  // memoized log E[X^t]; compute is invoked at most once per distinct t
  template <class F>
  double memo_log_moment(double t, F&& compute) const {
    {
      std::lock_guard<std::mutex> lock(memo_mu_);
      for (const auto& [key, val] : memo_)
        if (key == t) return val;
    }
    const double v = compute();
    std::lock_guard<std::mutex> lock(memo_mu_);
    for (const auto& [key, val] : memo_)
      if (key == t) return val;
    memo_.emplace_back(t, v);
    return v;
  }

 private:
  DistNode node_;
  mutable std::mutex memo_mu_;
  mutable std::vector<std::pair<double, double>> memo_;
};

// factories; all validate and throw InvalidSpec on bad parameters
DistPtr make_exponential(double rate);
DistPtr make_gamma(double shape);
DistPtr make_beta(double a, double b);
DistPtr make_beta_t(double t);
DistPtr make_log_normal(double mu, double sigma2);
DistPtr make_uniform(double lo, double hi);
DistPtr make_grid_survival(std::vector<std::pair<double, double>> points);
DistPtr make_scaled(DistPtr base, double factor);
DistPtr make_size_biased_node(DistPtr base, double t);  // no promotion
DistPtr make_excess_node(DistPtr base, double t);
DistPtr make_product(DistPtr left, DistPtr right);
DistPtr make_perturbed_log_normal(double mu, double sigma2, double eps);
DistPtr make_exp_levy(LevySpec levy);
DistPtr make_point_mass(double value);  // LogNormal(log value, 0)

// finiteness strip of E[X^lambda]; always contains 0
struct MellinDomain {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_included = false;
  bool hi_included = false;

  bool contains(double lam) const {
    if (lam < lo || (lam == lo && !lo_included)) return false;
    if (lam > hi || (lam == hi && !hi_included)) return false;
    return true;
  }
};

MellinDomain mellin_domain(const Dist& d);

// P(X > x); 1 for x < 0
double survival(const Dist& d, double x, const QuadOptions& opt = {});

bool has_density(const Dist& d);
// throws DensityUnavailable when the law has atoms or only grid data
double density(const Dist& d, double x, const QuadOptions& opt = {});

// law of k*X with closed-form pushdowns where the family is scale-stable
DistPtr scale(const DistPtr& d, double k);

// true (and the location) when the law is a single atom
bool is_point_mass(const Dist& d, double* value = nullptr);

// stable id used for child-seed derivation and serialization
std::string_view variant_name(const Dist& d);

struct SampleBatch {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<double> values;
};

// deterministic: identical (spec, n, seed) gives bit-identical batches
SampleBatch sample(const DistPtr& d, std::size_t n, std::uint64_t seed);

}  // namespace melt

#include <algorithm>
#include <cmath>
#include <vector>

#include "melt/dist.hpp"
#include "melt/grid_interp.hpp"
#include "melt/levy_spec.hpp"
#include "melt/mellin.hpp"
#include "melt/rng.hpp"
#include "melt/size_bias.hpp"

namespace melt {
namespace {

// role tags for child streams
constexpr std::uint64_t TAG_LEFT = 0x11;
constexpr std::uint64_t TAG_RIGHT = 0x22;
constexpr std::uint64_t TAG_BASE = 0x33;
constexpr std::uint64_t TAG_JUMPS = 0x44;

void sample_into(const DistPtr& d, std::uint64_t seed, std::vector<double>& out);

// Numeric inverse-CDF sampler backed by an adaptively refined survival table.
// Refinement stops once the interpolant reproduces fresh midpoint evaluations
// to 1e-8; each draw then bisects the interpolant down to 1e-10 relative to
// the bracket width.
class SurvivalSampler {
 public:
  explicit SurvivalSampler(const Dist& d) {
    double hi = 1.0;
    while (survival(d, hi) > 1e-12) {
      hi *= 2.0;
      if (hi > 1e300) throw SamplerUnavailable("survival tail never vanishes");
    }
    std::vector<double> xs, ys;
    const int n0 = 129;
    xs.reserve(n0);
    for (int i = 0; i < n0; ++i)
      xs.push_back(hi * static_cast<double>(i) / (n0 - 1));
    for (double x : xs) ys.push_back(survival(d, x));

    for (int round = 0; round < 14; ++round) {
      MonotoneCubic interp(xs, ys);
      std::vector<double> nx;
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double mid = 0.5 * (xs[i] + xs[i + 1]);
        if (mid <= xs[i] || mid >= xs[i + 1]) continue;
        const double predicted = interp(mid);
        const double actual = survival(d, mid);
        if (std::fabs(predicted - actual) > 1e-8) nx.push_back(mid);
      }
      if (nx.empty() || xs.size() > 20000) break;
      std::vector<double> mx, my;
      mx.reserve(xs.size() + nx.size());
      std::size_t a = 0, b = 0;
      while (a < xs.size() || b < nx.size()) {
        if (b == nx.size() || (a < xs.size() && xs[a] < nx[b])) {
          mx.push_back(xs[a]);
          my.push_back(ys[a]);
          ++a;
        } else {
          mx.push_back(nx[b]);
          my.push_back(survival(d, nx[b]));
          ++b;
        }
      }
      xs.swap(mx);
      ys.swap(my);
    }
    table_ = MonotoneCubic(std::move(xs), std::move(ys));
  }

  double draw(double u) const {
    // solve S(x) = u on [0, hi]
    if (u >= table_.y_front()) return 0.0;
    if (u <= table_.y_back()) return table_.x_back();
    double lo = table_.x_front(), hi = table_.x_back();
    const double tol = 1e-10 * std::max(1.0, hi);
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (table_(mid) > u)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  MonotoneCubic table_;
};

void sample_numeric_inverse(const Dist& d, std::uint64_t seed,
                            std::vector<double>& out) {
  SurvivalSampler inv(d);
  Rng rng(seed);
  for (double& v : out) v = inv.draw(rng.u01());
}

void sample_levy(const LevySpec& s, std::uint64_t seed,
                 std::vector<double>& out) {
  const double drift = levy_sampler_drift(s);
  const double sigma = std::sqrt(s.sigma2);
  const double intensity = levy_total_rate(s);
  Rng gauss(mix_seed(seed, TAG_BASE));
  Rng jumps(mix_seed(seed, TAG_JUMPS));

  // atom selection table
  std::vector<double> cum;
  if (s.jumps.kind == JumpKind::finite_atoms) {
    double acc = 0.0;
    for (const auto& [w, x] : s.jumps.atoms) {
      acc += w / intensity;
      cum.push_back(acc);
    }
  }

  for (double& v : out) {
    double l = drift;
    if (sigma > 0.0) l += sigma * gauss.normal();
    if (intensity > 0.0) {
      // Poisson count by inversion
      int k = 0;
      double p = std::exp(-intensity), acc = p;
      const double u = jumps.u01();
      while (u > acc && k < 10000) {
        ++k;
        p *= intensity / k;
        acc += p;
      }
      for (int i = 0; i < k; ++i) {
        if (s.jumps.kind == JumpKind::compound_poisson) {
          l -= s.jumps.jump_mean * jumps.expo();
        } else {
          const double u2 = jumps.u01();
          std::size_t idx = 0;
          while (idx + 1 < cum.size() && u2 > cum[idx]) ++idx;
          l -= s.jumps.atoms[idx].second;
        }
      }
    }
    v = std::exp(l);
  }
}

void sample_into(const DistPtr& d, std::uint64_t seed,
                 std::vector<double>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExponentialD>) {
          Rng rng(seed);
          for (double& v : out) v = rng.expo() / n.rate;
        } else if constexpr (std::is_same_v<T, GammaD>) {
          Rng rng(seed);
          for (double& v : out) v = rng.gamma_shape(n.shape);
        } else if constexpr (std::is_same_v<T, BetaD>) {
          Rng rng(seed);
          for (double& v : out) v = rng.beta(n.a, n.b);
        } else if constexpr (std::is_same_v<T, BetaTD>) {
          if (n.t == 0.0) {
            std::fill(out.begin(), out.end(), 1.0);
          } else {
            Rng rng(seed);
            for (double& v : out) v = -std::expm1(-rng.expo() / n.t);
          }
        } else if constexpr (std::is_same_v<T, LogNormalD>) {
          if (n.sigma2 == 0.0) {
            std::fill(out.begin(), out.end(), std::exp(n.mu));
          } else {
            Rng rng(seed);
            const double sigma = std::sqrt(n.sigma2);
            for (double& v : out) v = std::exp(n.mu + sigma * rng.normal());
          }
        } else if constexpr (std::is_same_v<T, UniformD>) {
          Rng rng(seed);
          for (double& v : out) v = n.lo + (n.hi - n.lo) * rng.u01();
        } else if constexpr (std::is_same_v<T, GridSurvivalD>) {
          // invert the knot interpolant directly
          const MonotoneCubic& c = *n.curve;
          Rng rng(seed);
          for (double& v : out) {
            const double u = rng.u01();
            if (u >= c.y_front()) {
              v = 0.0;
              continue;
            }
            if (u <= c.y_back()) {
              v = c.x_back();
              continue;
            }
            double lo = c.x_front(), hi = c.x_back();
            const double tol = 1e-10 * std::max(1.0, hi);
            while (hi - lo > tol) {
              const double mid = 0.5 * (lo + hi);
              if (c(mid) > u)
                lo = mid;
              else
                hi = mid;
            }
            v = 0.5 * (lo + hi);
          }
        } else if constexpr (std::is_same_v<T, ScaledD>) {
          sample_into(n.base, seed, out);
          for (double& v : out) v *= n.factor;
        } else if constexpr (std::is_same_v<T, SizeBiasedD>) {
          (void)n;
          sample_numeric_inverse(*d, mix_seed(seed, TAG_BASE), out);
        } else if constexpr (std::is_same_v<T, ExcessD>) {
          // b_t times the t-weighted base, independent streams
          std::vector<double> factor(out.size());
          sample_into(make_beta_t(n.t), mix_seed(seed, TAG_LEFT), factor);
          sample_into(size_bias(n.base, n.t), mix_seed(seed, TAG_RIGHT), out);
          for (std::size_t i = 0; i < out.size(); ++i) out[i] *= factor[i];
        } else if constexpr (std::is_same_v<T, ProductD>) {
          std::vector<double> right(out.size());
          sample_into(n.left, mix_seed(seed, TAG_LEFT), out);
          sample_into(n.right, mix_seed(seed, TAG_RIGHT), right);
          for (std::size_t i = 0; i < out.size(); ++i) out[i] *= right[i];
        } else if constexpr (std::is_same_v<T, PerturbedLogNormalD>) {
          (void)n;
          sample_numeric_inverse(*d, mix_seed(seed, TAG_BASE), out);
        } else if constexpr (std::is_same_v<T, ExpLevyD>) {
          sample_levy(n.levy, seed, out);
        }
      },
      d->node());
}

}  // namespace

SampleBatch sample(const DistPtr& d, std::size_t n, std::uint64_t seed) {
  if (!d) throw InvalidSpec("sample: missing spec");
  SampleBatch batch;
  batch.seed = seed;
  batch.n = n;
  batch.values.resize(n);
  sample_into(d, seed, batch.values);
  return batch;
}

}  // namespace melt

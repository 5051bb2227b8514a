#pragma once

#include <utility>
#include <vector>

namespace melt {

// Spectrally negative log-price model: L = d t + sigma B_t - J_t with J a
// pure-jump subordinator, observed at time 1. The jump measure is either a
// compound Poisson with exponential jumps or a finite atom list.
enum class JumpKind { none, compound_poisson, finite_atoms };

struct LevyJumps {
  JumpKind kind = JumpKind::none;
  // compound_poisson
  double rate = 0.0;
  double jump_mean = 0.0;
  // finite_atoms: (mass, location), locations > 0
  std::vector<std::pair<double, double>> atoms;
};

struct LevySpec {
  double d = 0.0;
  double sigma2 = 0.0;
  LevyJumps jumps;
};

void validate(const LevySpec& s);  // throws InvalidSpec

// cumulant g(lambda) = log E[e^{lambda L}]
//   = d*lambda + sigma2*lambda^2/2 + int (e^{-lambda x} - 1 + lambda x 1_{x<=1}) pi(dx)
double levy_exponent(const LevySpec& s, double lambda);

// lower endpoint of the finiteness strip (upper is +inf)
double levy_lambda_lower(const LevySpec& s);

// second difference of the cumulant,
//   D1 Ds g(t) = sigma2*s + int e^{-t x} (1 - e^{-x}) (1 - e^{-s x}) pi(dx),
// in closed form; nonnegative and decreasing to sigma2*s as t grows
double levy_delta(const LevySpec& s, double t, double s_step);

// exponential tilt: the law with cumulant g(t + .) - g(t); jump measure
// becomes e^{-t x} pi(dx), drift picks up sigma2*t plus the compensator
// correction, so the family is closed under size biasing of e^L
LevySpec levy_tilt(const LevySpec& s, double t);

// drift seen by the sampler once the small-jump compensator is folded in:
// L = levy_sampler_drift + sigma N - sum of jumps
double levy_sampler_drift(const LevySpec& s);

// total jump intensity
double levy_total_rate(const LevySpec& s);

// P(L > y); uses the Poisson mixture of the jump part (series for the
// compound Poisson gamma convolutions, enumeration for finite atoms)
double levy_log_price_survival(const LevySpec& s, double y);

// density of L at y when it exists (sigma2 > 0, or no jumps)
bool levy_log_price_has_density(const LevySpec& s);
double levy_log_price_density(const LevySpec& s, double y);

}  // namespace melt

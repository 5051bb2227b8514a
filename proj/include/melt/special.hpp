#pragma once

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

namespace melt {

inline constexpr double PI = 3.14159265358979323846;

inline double log_gamma(double x) { return std::lgamma(x); }

// log B(a,b)
inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// regularized upper incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a)
inline double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(a, x);
}

// survival of Beta(a,b) at x: I_x^c(a,b)
inline double beta_survival(double a, double b, double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  return boost::math::ibetac(a, b, x);
}

// standard normal pdf / survival
inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * PI);
}
inline double normal_survival(double z) {
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

// (1 - x/t)_+^t computed stably; converges to e^{-x} as t grows
inline double truncated_exp_kernel(double x, double t) {
  if (x >= t) return 0.0;
  if (x <= 0.0) return 1.0;
  return std::exp(t * std::log1p(-x / t));
}

}  // namespace melt

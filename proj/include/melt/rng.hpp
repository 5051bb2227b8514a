#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "melt/special.hpp"

namespace melt {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// child stream seed for a derived node; tag identifies the role (left factor,
// right factor, wrapped base, ...)
inline std::uint64_t mix_seed(std::uint64_t parent, std::uint64_t tag) {
  return splitmix64(parent ^ splitmix64(tag * 0x9e3779b97f4a7c15ULL + 1));
}

// Deterministic variate source. All transformations are done with explicit
// arithmetic on the engine's 64-bit outputs so batches are reproducible
// bit-for-bit for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  double u01() {
    // (0,1) strictly, 53-bit resolution
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
  }

  double expo() { return -std::log(u01()); }

  double normal() {
    const double u1 = u01();
    const double u2 = u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * PI * u2);
  }

  // Marsaglia-Tsang; shape < 1 via the boost step G(a) = G(a+1) U^{1/a}
  double gamma_shape(double a) {
    if (a < 1.0) {
      const double g = gamma_shape(a + 1.0);
      return g * std::pow(u01(), 1.0 / a);
    }
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = u01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma_shape(a);
    const double y = gamma_shape(b);
    return x / (x + y);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace melt

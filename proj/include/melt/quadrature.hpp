#pragma once

#include <functional>

namespace melt {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_panels = 1 << 15;
};

// integrands that themselves integrate (survival of a wrapper node, product
// convolutions) must run tighter than the enclosing target, or their noise
// floor stalls the outer refinement
inline QuadOptions inner_options(const QuadOptions& opt) {
  QuadOptions o = opt;
  o.abs_tol = opt.abs_tol * 1e-2 > 1e-14 ? opt.abs_tol * 1e-2 : 1e-14;
  o.rel_tol = opt.rel_tol * 1e-2 > 1e-12 ? opt.rel_tol * 1e-2 : 1e-12;
  return o;
}

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  long panels = 0;
  bool converged = false;
  bool saw_nonfinite = false;
};

using Integrand = std::function<double(double)>;

// adaptive Gauss-Kronrod 7-15 on a finite interval
QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              const QuadOptions& opt = {});

// doubling windows for semi-infinite or bi-infinite ranges; finite ranges
// fall through to integrate_adaptive
QuadResult integrate_windows(const Integrand& f, double lo, double hi,
                             const QuadOptions& opt = {});

// value or QuadratureFailure; "what" names the integral in the error message
double integrate_or_throw(const Integrand& f, double lo, double hi,
                          const QuadOptions& opt, const char* what);

}  // namespace melt

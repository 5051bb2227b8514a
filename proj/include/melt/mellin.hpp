#pragma once

#include <vector>

#include "melt/check.hpp"
#include "melt/dist.hpp"
#include "melt/quadrature.hpp"

namespace melt {

enum class MellinMethod { closed_form, quadrature, monte_carlo };

struct MellinValue {
  double lambda = 0.0;
  double value = 0.0;
  double abs_error = 0.0;
  MellinMethod method = MellinMethod::closed_form;
};

// log E[X^lambda] with a relative-error estimate; closed marks a value that
// never touched a quadrature
struct LogMellin {
  double log_value = 0.0;
  double rel_error = 0.0;
  bool closed = true;
};

// composition over the expression graph; throws OutOfDomain outside the strip
LogMellin log_mellin(const Dist& d, double lambda, const QuadOptions& opt = {});

MellinValue mellin(const Dist& d, double lambda, const QuadOptions& opt = {});

// independent route for lambda > 0:
// E[X^lambda] = lambda int_0^inf x^{lambda-1} P(X > x) dx,
// integrating this node's own survival function
MellinValue mellin_via_survival(const Dist& d, double lambda,
                                const QuadOptions& opt = {});

// density route int x^lambda f(x) dx, usable on both sides of 0
MellinValue mellin_via_density(const Dist& d, double lambda,
                               const QuadOptions& opt = {});

// cached log E[X^t] (composition route)
double log_moment(const DistPtr& d, double t);

// E[X^lambda 1_{X > x}] = x^lambda S(x) + lambda int_x^inf u^{lambda-1} S(u) du
double tail_moment(const Dist& d, double lambda, double x,
                   const QuadOptions& opt = {});

struct LogMellinProfile {
  std::vector<double> lambdas;
  std::vector<double> log_values;
};

LogMellinProfile log_mellin_profile(const Dist& d,
                                    const std::vector<double>& lambdas,
                                    const QuadOptions& opt = {});

// inclusive uniform grid helper
std::vector<double> make_grid(double lo, double hi, double step);
std::vector<double> default_lambda_grid();  // 0.25 .. 5.0 step 0.25

// discrete convexity of the log profile (chord test at interior points)
CheckResult check_log_convexity(const LogMellinProfile& p, double tol);

// t -> E[X^{lambda+t}]/E[X^t] nondecreasing over ts
CheckResult check_ratio_monotone(const Dist& d, double lambda,
                                 const std::vector<double>& ts, double tol);

// E[X^l]^{1/l} nondecreasing over positive lambdas
CheckResult check_lyapunov(const Dist& d, const std::vector<double>& lambdas,
                           double tol);

// max over the grid of |M_A - M_B| / max(M_A, 1); the identification metric
double mellin_distance(const Dist& a, const Dist& b,
                       const std::vector<double>& lambdas,
                       const QuadOptions& opt = {});

}  // namespace melt

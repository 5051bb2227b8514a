#pragma once

#include <vector>

#include "melt/check.hpp"
#include "melt/dist.hpp"
#include "melt/quadrature.hpp"

namespace melt {

// law with density x^t f(x)/E[X^t]; returns a closed-form family member when
// the promotion is known (Gamma, Beta, log-normal tilt, scaling and product
// rules, exponent merge), otherwise the generic weighted node
DistPtr size_bias(const DistPtr& d, double t);

// always the generic weighted node (the quadrature route), for cross-checks
DistPtr size_bias_wrapper(const DistPtr& d, double t);

// P(X_(t) > x) evaluated through the tail-integral formula
// (x^t S(x) + t int_x^inf u^{t-1} S(u) du) / E[X^t]
double biased_survival(const DistPtr& d, double t, double x,
                       const QuadOptions& opt = {});

// identities of the weighting operator on a lambda grid:
//   ratio formula, exponent additivity, power rescaling, independent products
std::vector<CheckResult> check_properties(const DistPtr& d, double t, double s,
                                          const std::vector<double>& lambdas,
                                          double tol);

// S_{X_(t)}(x) >= S_X(x) on an x grid (t >= 0)
CheckResult check_dominance(const DistPtr& d, double t,
                            const std::vector<double>& xs, double tol);

}  // namespace melt

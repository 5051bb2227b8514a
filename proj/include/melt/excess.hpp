#pragma once

#include <vector>

#include "melt/check.hpp"
#include "melt/dist.hpp"
#include "melt/mellin.hpp"

namespace melt {

// continuous-order stationary-excess law: survival E[(X-x)_+^t]/E[X^t];
// t = 0 is the identity
DistPtr excess(const DistPtr& d, double t);

// gamma-ratio route:
// E[E_t(X)^lambda] = Gamma(lambda+1)Gamma(t+1)/Gamma(lambda+t+1)
//                    * E[X^{lambda+t}]/E[X^t]
MellinValue excess_mellin(const DistPtr& d, double t, double lambda,
                          const QuadOptions& opt = {});

// E_t(E_s(X)) vs E_{s+t}(X) on a lambda grid; the nested side runs its inner
// Mellin values through the survival quadrature so the two routes stay
// independent
CheckResult check_semigroup(const DistPtr& d, double s, double t,
                            const std::vector<double>& lambdas, double tol);

// n-fold composition of the unit-order operator (n <= 8)
DistPtr iterate_discrete(const DistPtr& d, int n);

// survival and Mellin of the excess law of an exponential match the base
CheckResult check_exp_fixed_point(double rate, double t,
                                  const std::vector<double>& xs,
                                  const std::vector<double>& lambdas,
                                  double tol);

}  // namespace melt

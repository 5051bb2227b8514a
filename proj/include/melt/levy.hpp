#pragma once

#include <vector>

#include "melt/check.hpp"
#include "melt/dist.hpp"
#include "melt/levy_spec.hpp"

namespace melt {

// the law of X = e^L as a distribution node (closed-form Mellin, exact sampler)
DistPtr dist_from_levy(const LevySpec& s);

// closed-form second difference against a centered finite difference of the
// cumulant itself
CheckResult check_levy_delta(const LevySpec& s, const std::vector<double>& ts,
                             const std::vector<double>& ss, double tol);

// concavity of the cumulant derivative g' on a lambda grid
CheckResult check_levy_gprime_concave(const LevySpec& s,
                                      const std::vector<double>& lambdas,
                                      double tol);

// e^{D1 Ds g(t)} >= 1 and nonincreasing in t, limit e^{sigma2 s}
CheckResult check_levy_ratio_limit(const LevySpec& s, double s_step,
                                   const std::vector<double>& ts, double tol);

// l(s)^mu vs l(mu)^s at finite t: exp(mu D1 Ds g(t)) vs exp(s D1 Dmu g(t))
CheckResult check_levy_rate_symmetry(const LevySpec& s, double t, double s_step,
                                     double mu_step, double tol);

}  // namespace melt

#pragma once

#include <vector>

#include "melt/check.hpp"
#include "melt/dist.hpp"
#include "melt/mellin.hpp"

namespace melt {

// law of b_t * Y: every density of this form is t-monotone, and every
// t-monotone density arises this way
DistPtr beta_mix(const DistPtr& y, double t);

// integer-order monotonicity certificate on a uniform grid over [lo, hi]
// (257 density evaluations): alternating finite differences through order
// k-2, then the (k-2)-nd difference must be nonincreasing and convex.
// tol <= 0 picks 1e-7 * max|f|.  Pick lo strictly inside the support when
// the law puts density mass at the origin: boundary points evaluate to 0 for
// uniform and product nodes, which would read as a spurious jump.
CheckResult check_k_monotone(const DistPtr& d, int k, double lo, double hi,
                             double tol = 0.0);

// mixing a beta factor of higher order through a lower one:
// b_t * Y and b_s * (Beta(1+s, t-s) * Y) share the Mellin profile (0 < s < t)
CheckResult check_downward_closure(const DistPtr& y, double s, double t,
                                   const std::vector<double>& lambdas,
                                   double tol);

// sup_x |(1 - x/t)_+^t - e^{-x}| must decrease along ts and end below
// e / (2 max t)
CheckResult check_cm_limit(const std::vector<double>& ts,
                           const std::vector<double>& xs);

// divide out the beta factor: if Z = b_t * Y the quotient profile is the
// Mellin transform of Y; the validity certificate is log-convexity (plus
// positivity) of the recovered profile
struct RecoveredMixing {
  LogMellinProfile profile;
  CheckResult validity;
};

RecoveredMixing recover_mixing_mellin(const DistPtr& z, double t,
                                      const std::vector<double>& lambdas,
                                      double tol);

}  // namespace melt

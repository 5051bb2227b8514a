#pragma once

#include <cstdint>
#include <vector>

#include "melt/check.hpp"
#include "melt/dist.hpp"
#include "melt/mellin.hpp"

namespace melt {

enum class FamilyKind { bias, excess };

// rho_t = E[X^{t+1}] / (alpha E[X^t]), the scale under which both normalized
// families converge; dividing by it gives every X_t the target mean alpha
struct NormalizationCurve {
  double alpha = 1.0;
  std::vector<double> ts;
  std::vector<double> rho;
  bool nondecreasing = true;
};

NormalizationCurve rho_curve(const DistPtr& d, double alpha,
                             const std::vector<double>& ts);

// value = (1/s) [g(t+1+s) - g(t+1) - g(t+s) + g(t)], g = log E[X^.];
// constant in t exactly when log X is Gaussian
struct CEstimate {
  double t = 0.0;
  double s = 0.0;
  double value = 0.0;
};

CEstimate estimate_c(const DistPtr& d, double t, double s);

// x_inf = LogNormal(a - c/2, c) with a = log alpha (c = 0 degenerates to the
// point mass alpha); z_inf = Exp(1) * x_inf with independent factors
struct LimitLaw {
  double a = 0.0;
  double c = 0.0;
  DistPtr x_inf;
  DistPtr z_inf;
};

LimitLaw limit_law(double alpha, double c);

// bias: X_t = X_(t) / rho_t.  excess: Z_t = (t / rho_t) * excess-law of
// order t, the beta-mixed companion family
DistPtr normalized_family(const DistPtr& d, double alpha, double t,
                          FamilyKind kind);

// two-sample Kolmogorov-Smirnov statistic (copies are sorted internally)
double ks_statistic(std::vector<double> a, std::vector<double> b);

struct ConvergenceReport {
  NormalizationCurve curve;
  std::vector<CEstimate> c_estimates;  // one per grid t, at the report step s
  double fitted_c = 0.0;               // estimate at the largest t, s = 1
  bool c_consistent = true;            // s in {1/2, 1, 2} agree at largest t
  LimitLaw limit;

  std::vector<double> lambdas;
  // |M_{X_t}(lambda) / M_{X_inf}(lambda) - 1| per (t, lambda)
  std::vector<std::vector<double>> mellin_rel_err;

  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> ks;  // Z_t vs Z_inf, common random numbers across t

  // tail diagnostic: ladder of Z_inf sample quantiles, then for each grid t
  // the worst E[X_{t'} 1_{X_{t'} > x}] over the remaining grid t' >= t
  double ui_lambda = 1.0;
  std::vector<double> x_ladder;
  std::vector<std::vector<double>> ui_tail;

  CheckResult verdict;
};

// thresholds baked into the verdict: KS and Mellin error columns must not
// grow along the grid (factor 1.1 slack) and must end below 0.01 and 0.02
ConvergenceReport convergence_report(const DistPtr& d, double alpha,
                                     const std::vector<double>& ts,
                                     const std::vector<double>& lambdas,
                                     std::size_t n_samples, std::uint64_t seed,
                                     double s_step = 1.0);

// closed-form identities of the limit pair, all in log scale:
//   biasing shifts the log-normal:  g_X(s+l) - g_X(s) = c s l + g_X(l)
//   beta repair of the biased Z:    g_Z(l) = -c s l + g_bs(l) + g_Z(s+l) - g_Z(s)
//   exponent functional equation:   g_X(s+m) = c s m + g_X(s) + g_X(m)
CheckResult check_fixed_point(const LimitLaw& law, double s,
                              const std::vector<double>& lambdas, double tol);

// quadrature moments of the log-normal against its sine-perturbed companion:
// integer orders agree, the fractional probe does not
struct IndeterminacyReport {
  std::vector<int> orders;
  std::vector<double> moments_base;
  std::vector<double> moments_pert;
  std::vector<double> rel_gaps;
  double lambda_probe = 0.5;
  double probe_base = 0.0;
  double probe_pert = 0.0;
  double probe_gap = 0.0;         // quadrature route
  double closed_probe_gap = 0.0;  // eps e^{-pi^2/(2 sigma2)} |sin(pi l)| M(l)
};

IndeterminacyReport indeterminacy_demo(double mu, double sigma2, double eps,
                                       int k_max, double lambda_probe);

}  // namespace melt

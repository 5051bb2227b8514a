#include "melt/quadrature.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "melt/errors.hpp"

namespace melt {
namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1,1] (QUADPACK dqk15)
constexpr double XGK[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double WGK[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double WG[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct Panel {
  double a, b;
  double integral;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel eval_panel(const Integrand& f, double a, double b, bool& nonfinite) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  double fv1[7], fv2[7];
  auto safe = [&](double x) {
    double v = f(x);
    if (!std::isfinite(v)) {
      nonfinite = true;
      return 0.0;
    }
    return v;
  };

  const double fc = safe(c);
  double resg = WG[3] * fc;
  double resk = WGK[7] * fc;
  double resabs = WGK[7] * std::fabs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * XGK[j];
    fv1[j] = safe(c - dx);
    fv2[j] = safe(c + dx);
    resk += WGK[j] * (fv1[j] + fv2[j]);
    resabs += WGK[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
  }
  resg += WG[0] * (fv1[1] + fv2[1]);
  resg += WG[1] * (fv1[3] + fv2[3]);
  resg += WG[2] * (fv1[5] + fv2[5]);

  const double reskh = 0.5 * resk;
  double resasc = WGK[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += WGK[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));

  const double ah = std::fabs(h);
  double err = std::fabs((resk - resg) * h);
  resasc *= ah;
  resabs *= ah;
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  err = std::max(err, 50.0 * DBL_EPSILON * resabs);

  return Panel{a, b, resk * h, err};
}

}  // namespace

QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              const QuadOptions& opt) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }

  bool nonfinite = false;
  std::priority_queue<Panel> heap;
  Panel root = eval_panel(f, a, b, nonfinite);
  out.panels = 1;
  double total = root.integral;
  double toterr = root.error;
  double accepted_err = 0.0;  // panels too narrow to split further
  heap.push(root);

  while (toterr > std::max(opt.abs_tol, opt.rel_tol * std::fabs(total))) {
    if (out.panels + 2 > opt.max_panels) {
      out.value = total;
      out.abs_error = toterr + accepted_err;
      out.saw_nonfinite = nonfinite;
      return out;
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      accepted_err += worst.error;
      toterr -= worst.error;
      if (heap.empty()) break;
      continue;
    }
    Panel left = eval_panel(f, worst.a, mid, nonfinite);
    Panel right = eval_panel(f, mid, worst.b, nonfinite);
    out.panels += 2;
    total += left.integral + right.integral - worst.integral;
    toterr += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  out.value = total;
  out.abs_error = std::max(toterr, 0.0) + accepted_err;
  out.converged = !nonfinite;
  out.saw_nonfinite = nonfinite;
  return out;
}

QuadResult integrate_windows(const Integrand& f, double lo, double hi,
                             const QuadOptions& opt) {
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (!lo_inf && !hi_inf) return integrate_adaptive(f, lo, hi, opt);

  QuadResult out;
  out.converged = true;
  QuadOptions wopt = opt;
  int budget = opt.max_panels;

  auto run_window = [&](double a, double b) {
    wopt.max_panels = std::max(budget, 32);
    QuadResult r = integrate_adaptive(f, a, b, wopt);
    budget -= static_cast<int>(r.panels);
    out.panels += r.panels;
    out.value += r.value;
    out.abs_error += r.abs_error;
    out.saw_nonfinite = out.saw_nonfinite || r.saw_nonfinite;
    if (!r.converged) out.converged = false;
    return r;
  };

  const double anchor = lo_inf ? (hi_inf ? 0.0 : hi) : lo;
  const double max_offset = 1024.0;

  auto sweep = [&](int dir) {
    // windows anchor+dir*[w, 2w) doubling outward from width 1
    double inner = 0.0, width = 1.0;
    int quiet = 0;
    while (inner < max_offset) {
      const double a = anchor + dir * inner;
      const double b = anchor + dir * (inner + width);
      QuadResult r = dir > 0 ? run_window(a, b) : run_window(b, a);
      // quiet means small relative to the mass seen so far; an absolute floor
      // would silence integrals whose total value is itself tiny, and a zero
      // head must keep expanding or mass far from the anchor would be missed
      const double thresh = 0.125 * opt.rel_tol * std::fabs(out.value);
      if (out.value != 0.0 && std::fabs(r.value) + r.abs_error < thresh)
        ++quiet;
      else
        quiet = 0;
      inner += width;
      width *= 2.0;
      if (quiet >= 2 && inner >= 8.0) return true;
      if (budget <= 0) return false;
    }
    // ran off the cap while still seeing mass
    double a = anchor + dir * inner;
    double probe = f(a);
    return !(std::isfinite(probe) && std::fabs(probe) > opt.abs_tol);
  };

  if (hi_inf && !sweep(+1)) out.converged = false;
  if (lo_inf && !sweep(-1)) out.converged = false;
  if (out.saw_nonfinite) out.converged = false;
  return out;
}

double integrate_or_throw(const Integrand& f, double lo, double hi,
                          const QuadOptions& opt, const char* what) {
  QuadResult r = integrate_windows(f, lo, hi, opt);
  if (!r.converged)
    throw QuadratureFailure(std::string(what) + ": integral did not converge (err=" +
                            std::to_string(r.abs_error) + ", panels=" +
                            std::to_string(r.panels) + ")");
  return r.value;
}

}  // namespace melt

#include "melt/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "melt/excess.hpp"
#include "melt/size_bias.hpp"

namespace melt {

namespace {

double need_num(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw InvalidSpec(std::string("spec json: missing numeric field '") + key +
                      "'");
  return j[key].get<double>();
}

const Json& need_obj(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_object())
    throw InvalidSpec(std::string("spec json: missing object field '") + key +
                      "'");
  return j[key];
}

}  // namespace

Json levy_to_json(const LevySpec& s) {
  Json jumps;
  switch (s.jumps.kind) {
    case JumpKind::none:
      jumps["kind"] = "none";
      break;
    case JumpKind::compound_poisson:
      jumps["kind"] = "compound_poisson";
      jumps["rate"] = s.jumps.rate;
      jumps["jump_mean"] = s.jumps.jump_mean;
      break;
    case JumpKind::finite_atoms: {
      jumps["kind"] = "finite_atoms";
      Json atoms = Json::array();
      for (const auto& [mass, loc] : s.jumps.atoms)
        atoms.push_back(Json::array({mass, loc}));
      jumps["atoms"] = std::move(atoms);
      break;
    }
  }
  return Json{{"d", s.d}, {"sigma2", s.sigma2}, {"jumps", std::move(jumps)}};
}

LevySpec levy_from_json(const Json& j) {
  LevySpec s;
  s.d = need_num(j, "d");
  s.sigma2 = need_num(j, "sigma2");
  const Json& jumps = need_obj(j, "jumps");
  const std::string kind = jumps.value("kind", "none");
  if (kind == "none") {
    s.jumps.kind = JumpKind::none;
  } else if (kind == "compound_poisson") {
    s.jumps.kind = JumpKind::compound_poisson;
    s.jumps.rate = need_num(jumps, "rate");
    s.jumps.jump_mean = need_num(jumps, "jump_mean");
  } else if (kind == "finite_atoms") {
    s.jumps.kind = JumpKind::finite_atoms;
    if (!jumps.contains("atoms") || !jumps["atoms"].is_array())
      throw InvalidSpec("levy json: finite_atoms needs an atoms array");
    for (const auto& a : jumps["atoms"]) {
      if (!a.is_array() || a.size() != 2)
        throw InvalidSpec("levy json: atom entries are [mass, location]");
      s.jumps.atoms.emplace_back(a[0].get<double>(), a[1].get<double>());
    }
  } else {
    throw InvalidSpec("levy json: unknown jump kind '" + kind + "'");
  }
  validate(s);
  return s;
}

Json spec_to_json(const DistPtr& d) {
  Json j;
  j["variant"] = std::string(variant_name(*d));
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExponentialD>) {
          j["rate"] = n.rate;
        } else if constexpr (std::is_same_v<T, GammaD>) {
          j["shape"] = n.shape;
        } else if constexpr (std::is_same_v<T, BetaD>) {
          j["a"] = n.a;
          j["b"] = n.b;
        } else if constexpr (std::is_same_v<T, BetaTD>) {
          j["t"] = n.t;
        } else if constexpr (std::is_same_v<T, LogNormalD>) {
          j["mu"] = n.mu;
          j["sigma2"] = n.sigma2;
        } else if constexpr (std::is_same_v<T, UniformD>) {
          j["lo"] = n.lo;
          j["hi"] = n.hi;
        } else if constexpr (std::is_same_v<T, GridSurvivalD>) {
          Json pts = Json::array();
          const auto& xs = n.curve->xs();
          const auto& ys = n.curve->ys();
          for (std::size_t i = 0; i < xs.size(); ++i)
            pts.push_back(Json::array({xs[i], ys[i]}));
          j["points"] = std::move(pts);
        } else if constexpr (std::is_same_v<T, ScaledD>) {
          j["factor"] = n.factor;
          j["base"] = spec_to_json(n.base);
        } else if constexpr (std::is_same_v<T, SizeBiasedD>) {
          j["t"] = n.t;
          j["base"] = spec_to_json(n.base);
        } else if constexpr (std::is_same_v<T, ExcessD>) {
          j["t"] = n.t;
          j["base"] = spec_to_json(n.base);
        } else if constexpr (std::is_same_v<T, ProductD>) {
          j["left"] = spec_to_json(n.left);
          j["right"] = spec_to_json(n.right);
        } else if constexpr (std::is_same_v<T, PerturbedLogNormalD>) {
          j["mu"] = n.mu;
          j["sigma2"] = n.sigma2;
          j["eps"] = n.eps;
        } else if constexpr (std::is_same_v<T, ExpLevyD>) {
          j["levy"] = levy_to_json(n.levy);
        }
      },
      d->node());
  return j;
}

DistPtr spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("variant") || !j["variant"].is_string())
    throw InvalidSpec("spec json: need an object with a 'variant' string");
  const std::string v = j["variant"].get<std::string>();
  if (v == "exponential") return make_exponential(need_num(j, "rate"));
  if (v == "gamma") return make_gamma(need_num(j, "shape"));
  if (v == "beta") return make_beta(need_num(j, "a"), need_num(j, "b"));
  if (v == "beta_t") return make_beta_t(need_num(j, "t"));
  if (v == "log_normal")
    return make_log_normal(need_num(j, "mu"), need_num(j, "sigma2"));
  if (v == "uniform")
    return make_uniform(need_num(j, "lo"), need_num(j, "hi"));
  if (v == "grid_survival") {
    if (!j.contains("points") || !j["points"].is_array())
      throw InvalidSpec("spec json: grid_survival needs a points array");
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : j["points"]) {
      if (!p.is_array() || p.size() != 2)
        throw InvalidSpec("spec json: grid points are [x, survival]");
      pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return make_grid_survival(std::move(pts));
  }
  if (v == "scaled")
    return make_scaled(spec_from_json(need_obj(j, "base")),
                       need_num(j, "factor"));
  if (v == "size_biased")
    return make_size_biased_node(spec_from_json(need_obj(j, "base")),
                                 need_num(j, "t"));
  if (v == "excess")
    return make_excess_node(spec_from_json(need_obj(j, "base")),
                            need_num(j, "t"));
  if (v == "product_indep")
    return make_product(spec_from_json(need_obj(j, "left")),
                        spec_from_json(need_obj(j, "right")));
  if (v == "perturbed_log_normal")
    return make_perturbed_log_normal(need_num(j, "mu"), need_num(j, "sigma2"),
                                     need_num(j, "eps"));
  if (v == "exp_levy") return make_exp_levy(levy_from_json(need_obj(j, "levy")));
  throw InvalidSpec("spec json: unknown variant '" + v + "'");
}

Json check_to_json(const CheckResult& r) {
  return Json{{"name", r.name},
              {"passed", r.passed},
              {"worst", r.worst},
              {"tol", r.tol},
              {"where", r.where}};
}

Json report_to_json(const ConvergenceReport& r) {
  Json j;
  j["alpha"] = r.curve.alpha;
  j["t_grid"] = r.curve.ts;
  j["rho"] = r.curve.rho;
  j["rho_nondecreasing"] = r.curve.nondecreasing;
  Json cs = Json::array();
  for (const auto& e : r.c_estimates)
    cs.push_back(Json{{"t", e.t}, {"s", e.s}, {"value", e.value}});
  j["c_estimates"] = std::move(cs);
  j["fitted_c"] = r.fitted_c;
  j["c_consistent"] = r.c_consistent;
  j["limit"] = Json{{"a", r.limit.a}, {"c", r.limit.c}};
  j["lambdas"] = r.lambdas;
  j["mellin_rel_err"] = r.mellin_rel_err;
  j["n_samples"] = r.n_samples;
  j["seed"] = r.seed;
  j["ks"] = r.ks;
  j["ui_lambda"] = r.ui_lambda;
  j["x_ladder"] = r.x_ladder;
  j["ui_tail"] = r.ui_tail;
  j["verdict"] = check_to_json(r.verdict);
  return j;
}

Json indeterminacy_to_json(const IndeterminacyReport& r) {
  Json j;
  j["orders"] = r.orders;
  j["moments_base"] = r.moments_base;
  j["moments_pert"] = r.moments_pert;
  j["rel_gaps"] = r.rel_gaps;
  j["lambda_probe"] = r.lambda_probe;
  j["probe_base"] = r.probe_base;
  j["probe_pert"] = r.probe_pert;
  j["probe_gap"] = r.probe_gap;
  j["closed_probe_gap"] = r.closed_probe_gap;
  return j;
}

DistPtr grid_from_csv(std::istream& in) {
  std::vector<std::pair<double, double>> pts;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream row(line);
    double x, s;
    if (row >> x >> s) pts.emplace_back(x, s);
  }
  if (pts.empty()) throw InvalidSpec("grid csv: no (x, survival) rows found");
  return make_grid_survival(std::move(pts));
}

std::uint64_t config_digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void csv_begin(std::ostream& out, const std::string& columns,
               std::uint64_t digest) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(digest));
  out << "# config_digest=" << buf << "\n" << columns << "\n";
}

void report_to_csv(const ConvergenceReport& r, std::uint64_t digest,
                   std::ostream& out) {
  csv_begin(out, "kind,t,key,value", digest);
  const auto& ts = r.curve.ts;
  for (std::size_t i = 0; i < ts.size(); ++i)
    out << "rho," << ts[i] << ",," << r.curve.rho[i] << "\n";
  for (const auto& e : r.c_estimates)
    out << "c_estimate," << e.t << "," << e.s << "," << e.value << "\n";
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t k = 0; k < r.lambdas.size(); ++k)
      out << "mellin_rel_err," << ts[i] << "," << r.lambdas[k] << ","
          << r.mellin_rel_err[i][k] << "\n";
  for (std::size_t i = 0; i < ts.size(); ++i)
    out << "ks," << ts[i] << ",," << r.ks[i] << "\n";
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t k = 0; k < r.x_ladder.size(); ++k)
      out << "ui_tail," << ts[i] << "," << r.x_ladder[k] << ","
          << r.ui_tail[i][k] << "\n";
}

}  // namespace melt

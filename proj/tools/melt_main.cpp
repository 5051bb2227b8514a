#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "melt/excess.hpp"
#include "melt/io.hpp"
#include "melt/levy.hpp"
#include "melt/limit.hpp"
#include "melt/mellin.hpp"
#include "melt/size_bias.hpp"
#include "melt/suite.hpp"
#include "melt/tmono.hpp"

namespace {

using melt::Json;

struct Range {
  double lo = 0.0, hi = 0.0, step = 0.0;
};

Range parse_range(const std::string& s) {
  Range r;
  char c1, c2;
  std::istringstream in(s);
  if (!(in >> r.lo >> c1 >> r.hi >> c2 >> r.step) || c1 != ':' || c2 != ':' ||
      !(r.step > 0.0) || r.hi < r.lo)
    throw melt::InvalidSpec("range flag needs lo:hi:step with step > 0, got '" +
                            s + "'");
  return r;
}

std::vector<double> grid_of(const std::string& s) {
  const Range r = parse_range(s);
  return melt::make_grid(r.lo, r.hi, r.step);
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw melt::InvalidSpec("cannot open spec file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw melt::InvalidSpec("bad JSON in '" + path + "': " + e.what());
  }
  return j;
}

melt::DistPtr load_spec(const std::string& path) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
    std::ifstream in(path);
    if (!in) throw melt::InvalidSpec("cannot open grid file '" + path + "'");
    return melt::grid_from_csv(in);
  }
  return melt::spec_from_json(load_json(path));
}

melt::LevySpec load_levy(const std::string& path) {
  const Json j = load_json(path);
  if (j.contains("variant")) {
    const melt::DistPtr d = melt::spec_from_json(j);
    if (const auto* n = d->get_if<melt::ExpLevyD>()) return n->levy;
    throw melt::InvalidSpec("levy subcommand needs an exp_levy spec");
  }
  return melt::levy_from_json(j);
}

void emit(const std::string& out_dir, const std::string& name,
          const std::string& content) {
  if (out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / name;
  std::ofstream out(path);
  out << content;
  std::cout << path.string() << "\n";
}

char hex_digit(std::uint64_t v) {
  return "0123456789abcdef"[v & 0xf];
}

std::string hex64(std::uint64_t v) {
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = hex_digit(v);
  return s;
}

int checks_exit(const std::vector<melt::CheckResult>& rs) {
  return melt::all_passed(rs) ? 0 : 1;
}

struct CommonFlags {
  std::string spec;
  std::string out_dir;
  std::string format = "json";
  std::string lambda_range = "0.25:5:0.25";
  std::string t_range = "5:40:5";
  double alpha = 1.0;
  double t = 1.0;
  double s = 1.0;
  double tol = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 42;
  int k = 2;
};

std::string table_csv(const std::string& header, std::uint64_t digest,
                      const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  out.precision(12);
  melt::csv_begin(out, header, digest);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
  return out.str();
}

int run_mellin(const CommonFlags& f) {
  const melt::DistPtr d = load_spec(f.spec);
  const auto lambdas = grid_of(f.lambda_range);
  Json cfg{{"cmd", "mellin"}, {"spec", melt::spec_to_json(d)},
           {"lambda", f.lambda_range}};
  const std::uint64_t digest = melt::config_digest(cfg.dump());

  if (f.format == "csv") {
    std::vector<std::vector<double>> rows;
    for (double lam : lambdas) {
      const melt::LogMellin g = melt::log_mellin(*d, lam);
      rows.push_back({lam, std::exp(g.log_value), g.log_value,
                      g.closed ? 1.0 : 0.0});
    }
    emit(f.out_dir, "mellin.csv",
         table_csv("lambda,value,log_value,closed", digest, rows));
    return 0;
  }
  Json out{{"config_digest", hex64(digest)}, {"spec", melt::spec_to_json(d)}};
  Json tab = Json::array();
  for (double lam : lambdas) {
    const melt::LogMellin g = melt::log_mellin(*d, lam);
    tab.push_back(Json{{"lambda", lam},
                       {"value", std::exp(g.log_value)},
                       {"log_value", g.log_value},
                       {"closed", g.closed}});
  }
  out["mellin"] = std::move(tab);
  emit(f.out_dir, "mellin.json", out.dump(2) + "\n");
  return 0;
}

int run_bias(const CommonFlags& f) {
  const melt::DistPtr d = load_spec(f.spec);
  const auto lambdas = grid_of(f.lambda_range);
  const double tol = f.tol > 0.0 ? f.tol : 1e-9;
  auto checks = melt::check_properties(d, f.t, f.s, lambdas, tol);
  checks.push_back(melt::check_dominance(
      d, f.t, {0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}, 1e-8));

  Json cfg{{"cmd", "bias"}, {"spec", melt::spec_to_json(d)}, {"t", f.t},
           {"s", f.s}};
  Json out{{"config_digest", hex64(melt::config_digest(cfg.dump()))},
           {"biased_spec", melt::spec_to_json(melt::size_bias(d, f.t))}};
  Json cj = Json::array();
  for (const auto& c : checks) cj.push_back(melt::check_to_json(c));
  out["checks"] = std::move(cj);
  emit(f.out_dir, "bias.json", out.dump(2) + "\n");
  return checks_exit(checks);
}

int run_excess(const CommonFlags& f) {
  const melt::DistPtr d = load_spec(f.spec);
  const auto lambdas = grid_of(f.lambda_range);
  const double tol = f.tol > 0.0 ? f.tol : 1e-5;
  std::vector<melt::CheckResult> checks;
  checks.push_back(melt::check_semigroup(d, f.s, f.t, lambdas, tol));
  if (const auto* e = d->get_if<melt::ExponentialD>())
    checks.push_back(melt::check_exp_fixed_point(
        e->rate, f.t, melt::make_grid(0.0, 4.0 / e->rate, 0.25 / e->rate),
        lambdas, 1e-6));

  Json cfg{{"cmd", "excess"}, {"spec", melt::spec_to_json(d)}, {"t", f.t},
           {"s", f.s}};
  Json out{{"config_digest", hex64(melt::config_digest(cfg.dump()))},
           {"excess_spec", melt::spec_to_json(melt::excess(d, f.t))}};
  Json cj = Json::array();
  for (const auto& c : checks) cj.push_back(melt::check_to_json(c));
  out["checks"] = std::move(cj);
  emit(f.out_dir, "excess.json", out.dump(2) + "\n");
  return checks_exit(checks);
}

int run_tmono(const CommonFlags& f) {
  const melt::DistPtr d = load_spec(f.spec);
  const Range xr = parse_range(f.t_range);
  const auto lambdas = grid_of(f.lambda_range);
  std::vector<melt::CheckResult> checks;
  for (int k = 1; k <= f.k; ++k)
    checks.push_back(melt::check_k_monotone(d, k, xr.lo, xr.hi, f.tol));
  const melt::RecoveredMixing rec =
      melt::recover_mixing_mellin(d, f.s, lambdas, 1e-9);
  checks.push_back(rec.validity);

  Json cfg{{"cmd", "tmono"}, {"spec", melt::spec_to_json(d)}, {"k", f.k},
           {"s", f.s}};
  Json out{{"config_digest", hex64(melt::config_digest(cfg.dump()))}};
  Json cj = Json::array();
  for (const auto& c : checks) cj.push_back(melt::check_to_json(c));
  out["checks"] = std::move(cj);
  Json prof = Json::array();
  for (std::size_t i = 0; i < rec.profile.lambdas.size(); ++i)
    prof.push_back(Json::array(
        {rec.profile.lambdas[i], rec.profile.log_values[i]}));
  out["recovered_log_mellin"] = std::move(prof);
  emit(f.out_dir, "tmono.json", out.dump(2) + "\n");
  return checks_exit(checks);
}

int run_limit(const CommonFlags& f) {
  const melt::DistPtr d = load_spec(f.spec);
  const auto ts = grid_of(f.t_range);
  const auto lambdas = grid_of(f.lambda_range);
  const std::size_t n = f.n ? f.n : 20000;
  const auto rep = melt::convergence_report(d, f.alpha, ts, lambdas, n,
                                            f.seed, f.s);
  Json cfg{{"cmd", "limit"}, {"spec", melt::spec_to_json(d)},
           {"alpha", f.alpha}, {"t", f.t_range}, {"lambda", f.lambda_range},
           {"n", n},           {"seed", f.seed},  {"s", f.s}};
  const std::uint64_t digest = melt::config_digest(cfg.dump());
  if (f.format == "csv") {
    std::ostringstream out;
    out.precision(12);
    melt::report_to_csv(rep, digest, out);
    emit(f.out_dir, "limit.csv", out.str());
  } else {
    Json out = melt::report_to_json(rep);
    out["config_digest"] = hex64(digest);
    emit(f.out_dir, "limit.json", out.dump(2) + "\n");
  }
  return rep.verdict.passed ? 0 : 1;
}

int run_levy(const CommonFlags& f) {
  const melt::LevySpec spec = load_levy(f.spec);
  const auto lambdas = grid_of(f.lambda_range);
  const auto ts = grid_of(f.t_range);
  Json cfg{{"cmd", "levy"}, {"levy", melt::levy_to_json(spec)},
           {"lambda", f.lambda_range}, {"t", f.t_range}, {"s", f.s}};
  const std::uint64_t digest = melt::config_digest(cfg.dump());

  std::vector<std::vector<double>> exo;
  for (double lam : lambdas)
    exo.push_back({lam, melt::levy_exponent(spec, lam)});
  std::vector<std::vector<double>> conv;
  for (double t : ts)
    conv.push_back({t, melt::levy_delta(spec, t, f.s) / f.s});

  const double tol = f.tol > 0.0 ? f.tol : 1e-8;
  // the asymptote gap at the last grid point shrinks like 1/t^3, so its
  // default slack is sized for grids reaching t ~ 50; --tol overrides
  const double ratio_tol = f.tol > 0.0 ? f.tol : 1e-4;
  std::vector<melt::CheckResult> checks;
  checks.push_back(melt::check_levy_delta(spec, ts, {0.5, 1.0, 2.0}, 1e-10));
  checks.push_back(melt::check_levy_gprime_concave(spec, lambdas, tol));
  checks.push_back(melt::check_levy_ratio_limit(spec, f.s, ts, ratio_tol));

  emit(f.out_dir, "levy_exponent.csv",
       table_csv("lambda,exponent", digest, exo));
  if (!f.out_dir.empty()) {
    emit(f.out_dir, "levy_c.csv", table_csv("t,c_estimate", digest, conv));
    Json cj = Json::array();
    for (const auto& c : checks) cj.push_back(melt::check_to_json(c));
    Json out{{"config_digest", hex64(digest)}, {"checks", std::move(cj)}};
    emit(f.out_dir, "levy_checks.json", out.dump(2) + "\n");
  }
  return checks_exit(checks);
}

int run_suite(const CommonFlags& f) {
  const auto rs = melt::run_acceptance(f.seed, &std::cout);
  if (!f.out_dir.empty()) {
    Json arr = Json::array();
    for (const auto& r : rs)
      arr.push_back(Json{{"id", r.id},
                         {"name", r.name},
                         {"passed", r.passed},
                         {"worst_margin", r.worst},
                         {"seconds", r.seconds},
                         {"detail", r.detail}});
    Json out{{"seed", f.seed}, {"criteria", std::move(arr)},
             {"passed", melt::suite_passed(rs)}};
    emit(f.out_dir, "suite.json", out.dump(2) + "\n");
  }
  std::cout << (melt::suite_passed(rs) ? "SUITE PASS" : "SUITE FAIL") << "\n";
  return melt::suite_passed(rs) ? 0 : 1;
}

int run_sample(const CommonFlags& f) {
  const melt::DistPtr d = load_spec(f.spec);
  const std::size_t n = f.n ? f.n : 1000;
  const melt::SampleBatch b = melt::sample(d, n, f.seed);
  Json cfg{{"cmd", "sample"}, {"spec", melt::spec_to_json(d)}, {"n", n},
           {"seed", f.seed}};
  std::ostringstream out;
  out.precision(17);
  melt::csv_begin(out, "value", melt::config_digest(cfg.dump()));
  for (double v : b.values) out << v << "\n";
  emit(f.out_dir, "samples.csv", out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mellin-calculus toolkit for nonnegative distributions"};
  app.require_subcommand(1);
  CommonFlags f;

  auto add_common = [&](CLI::App* cmd, bool needs_spec) {
    if (needs_spec)
      cmd->add_option("--spec", f.spec, "spec file (.json, or .csv survival grid)")
          ->required();
    cmd->add_option("--out", f.out_dir, "output directory (default: stdout)");
    cmd->add_option("--format", f.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--tol", f.tol, "override the default tolerance");
    return cmd;
  };

  auto* c_mellin = add_common(app.add_subcommand("mellin", "Mellin table"), true);
  c_mellin->add_option("--lambda", f.lambda_range, "order grid lo:hi:step");

  auto* c_bias = add_common(
      app.add_subcommand("bias", "size-bias a spec and run the operator checks"),
      true);
  c_bias->add_option("--t", f.t, "weighting order");
  c_bias->add_option("--s", f.s, "second order for additivity");
  c_bias->add_option("--lambda", f.lambda_range, "order grid lo:hi:step");

  auto* c_excess = add_common(
      app.add_subcommand("excess", "excess law, semigroup and fixed point"),
      true);
  c_excess->add_option("--t", f.t, "outer order");
  c_excess->add_option("--s", f.s, "inner order");
  c_excess->add_option("--lambda", f.lambda_range, "order grid lo:hi:step");

  auto* c_tmono = add_common(
      app.add_subcommand("tmono", "monotonicity certificates"), true);
  c_tmono->add_option("--n", f.n, "certificate order k (default 2)");
  c_tmono->add_option("--t", f.t_range,
                      "x range lo:hi:step for the difference grid");
  c_tmono->add_option("--s", f.s, "beta factor order for the recovery step");
  c_tmono->add_option("--lambda", f.lambda_range, "recovery grid lo:hi:step");

  auto* c_limit = add_common(
      app.add_subcommand("limit", "full convergence report"), true);
  c_limit->add_option("--alpha", f.alpha, "target limit mean");
  c_limit->add_option("--t", f.t_range, "order grid lo:hi:step");
  c_limit->add_option("--lambda", f.lambda_range, "Mellin grid lo:hi:step");
  c_limit->add_option("--n", f.n, "samples per KS side (default 20000)");
  c_limit->add_option("--seed", f.seed, "sampler seed");
  c_limit->add_option("--s", f.s, "second-difference step");

  auto* c_levy = add_common(
      app.add_subcommand("levy", "cumulant tables and c convergence"), true);
  c_levy->add_option("--lambda", f.lambda_range, "exponent grid lo:hi:step");
  c_levy->add_option("--t", f.t_range, "order grid lo:hi:step");
  c_levy->add_option("--s", f.s, "second-difference step");

  auto* c_suite = add_common(
      app.add_subcommand("check-suite", "run the full acceptance battery"),
      false);
  c_suite->add_option("--seed", f.seed, "randomized-check seed");

  auto* c_sample = add_common(
      app.add_subcommand("sample", "emit a deterministic sample batch"), true);
  c_sample->add_option("--n", f.n, "batch size (default 1000)");
  c_sample->add_option("--seed", f.seed, "sampler seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  f.t_range = c_tmono->parsed() && !c_tmono->count("--t")
                  ? "0.00390625:4:0.5"
                  : f.t_range;
  if (c_tmono->parsed()) f.k = f.n ? static_cast<int>(f.n) : 2;

  try {
    if (c_mellin->parsed()) return run_mellin(f);
    if (c_bias->parsed()) return run_bias(f);
    if (c_excess->parsed()) return run_excess(f);
    if (c_tmono->parsed()) return run_tmono(f);
    if (c_limit->parsed()) return run_limit(f);
    if (c_levy->parsed()) return run_levy(f);
    if (c_suite->parsed()) return run_suite(f);
    if (c_sample->parsed()) return run_sample(f);
  } catch (const melt::InvalidSpec& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const melt::OutOfDomain& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

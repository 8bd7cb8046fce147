#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hrext/errors.hpp"
#include "hrext/report.hpp"

namespace {

struct Flags {
  std::string lambda, tau, ngrid, grid, format, out, coupling, kind, points, config;
  double phi = 0.0, tol = 0.0, epsilon = 0.0;
  std::int64_t n = 0, reps = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  bool allow_large = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--lambda", f.lambda, "Husler-Reiss parameter (number, 0 or inf)");
  cmd->add_option("--grid", f.grid, "Grid lo:hi[:count]");
  cmd->add_option("--seed", f.seed, "Master seed (fallback: HREXT_SEED, then 1)");
  cmd->add_option("--format", f.format, "Output format: csv or json");
  cmd->add_option("--out", f.out, "Output path (default: stdout)");
  cmd->add_option("--config", f.config, "JSON config file; flags override its values");
}

void add_verify(CLI::App* cmd, Flags& f) {
  add_common(cmd, f);
  cmd->add_option("--phi", f.phi, "AR(1) coefficient of the weakly dependent array");
  cmd->add_option("--tau", f.tau, "Strong-dependence constants t11,t22,t12");
  cmd->add_option("--n", f.n, "Row length (aslt: largest row)");
  cmd->add_option("--ngrid", f.ngrid, "Comma-separated n grid for bounds");
  cmd->add_option("--reps", f.reps, "Monte Carlo replications (aslt: independent paths)");
  cmd->add_option("--tol", f.tol, "Override the pass tolerance");
  cmd->add_option("--coupling", f.coupling, "Cross-row coupling: indep or shared:C");
  cmd->add_option("--epsilon", f.epsilon, "Exponent slack in the (ln ln n)^(1+eps) rate");
  cmd->add_option("--kind", f.kind, "Bound kind: L1, L2, eq13 or eq14");
  cmd->add_option("--point", f.points, "Evaluation points x,y[;x,y...]");
  cmd->add_option("--workers", f.workers, "Worker threads; results do not depend on it")->check(CLI::Range(1, 256));
  cmd->add_flag("--allow-large", f.allow_large, "Allow aslt rows beyond the default cap");
}

hrext::RunConfig load_config(const std::string& path, bool& has_seed) {
  std::ifstream in(path);
  if (!in) throw hrext::UsageError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception&) {
    throw hrext::UsageError("config file '" + path + "' is not valid JSON");
  }
  has_seed = j.is_object() && j.contains("seed");
  return hrext::config_from_json(j);
}

std::uint64_t env_seed() {
  const char* s = std::getenv("HREXT_SEED");
  if (!s || !*s) return 1;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw hrext::UsageError(std::string("HREXT_SEED is not an unsigned integer: '") + s + "'");
  }
}

hrext::RunConfig build_config(CLI::App* cmd, const Flags& f, const std::string& command, const std::string& target) {
  hrext::RunConfig cfg;
  bool seed_from_file = false;
  if (cmd->count("--config")) cfg = load_config(f.config, seed_from_file);
  if (!seed_from_file) cfg.seed = env_seed();
  cfg.command = command;
  cfg.target = target;
  const auto set = [cmd](const char* name) { return cmd->get_option_no_throw(name) && cmd->count(name) > 0; };
  if (set("--lambda")) {
    hrext::parse_lambda(f.lambda);
    cfg.lambda = f.lambda;
  }
  if (set("--grid")) cfg.grid = hrext::parse_grid(f.grid);
  if (set("--seed")) cfg.seed = f.seed;
  if (set("--format")) cfg.format = hrext::parse_format(f.format);
  if (set("--out")) cfg.out = f.out;
  if (set("--phi")) cfg.phi = f.phi;
  if (set("--tau")) cfg.tau = hrext::parse_tau(f.tau);
  if (set("--n")) cfg.n = f.n;
  if (set("--ngrid")) cfg.n_grid = hrext::parse_ngrid(f.ngrid);
  if (set("--reps")) cfg.reps = f.reps;
  if (set("--tol")) cfg.tol = f.tol;
  if (set("--coupling")) {
    hrext::parse_coupling(f.coupling);
    cfg.coupling = f.coupling;
  }
  if (set("--epsilon")) cfg.epsilon = f.epsilon;
  if (set("--kind")) cfg.kind = f.kind;
  if (set("--point")) cfg.points = hrext::parse_points(f.points);
  if (set("--workers")) cfg.workers = f.workers;
  if (set("--allow-large")) cfg.allow_large = f.allow_large;
  return cfg;
}

int emit(const hrext::Report& rep) {
  const std::string text = hrext::render(rep);
  if (rep.config.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(rep.config.out, std::ios::binary);
    if (!out) throw hrext::UsageError("cannot write '" + rep.config.out + "'");
    out << text;
  }
  return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Husler-Reiss limits of Gaussian triangular arrays"};
  app.set_version_flag("--version", hrext::version());
  app.require_subcommand(1);

  Flags eval_flags;
  auto* eval = app.add_subcommand("hr-eval", "Tabulate H_lambda and V_lambda on a grid");
  add_common(eval, eval_flags);

  Flags verify_flags;
  auto* verify = app.add_subcommand("verify", "Empirical-vs-limit checks");
  verify->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> targets;
  for (const char* t : {"weak", "strong", "maxmin", "aslt", "bounds"})
    targets.emplace_back(t, verify->add_subcommand(t));
  for (auto& [name, cmd] : targets) add_verify(cmd, verify_flags);
  targets[0].second->description("Weakly dependent rows against H_lambda");
  targets[1].second->description("Strongly dependent rows against the Gaussian mixture limit");
  targets[2].second->description("Joint maxima and minima against the product limit");
  targets[3].second->description("Logarithmic averages of row indicators");
  targets[4].second->description("Comparison-lemma sums over an n grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    std::cerr << "hrext: " << e.what() << '\n';
    return 2;
  }

  try {
    if (eval->parsed()) return emit(hrext::run_hr_eval(build_config(eval, eval_flags, "hr-eval", "")));
    for (auto& [name, cmd] : targets)
      if (cmd->parsed()) return emit(hrext::run_verify(build_config(cmd, verify_flags, "verify", name)));
  } catch (const hrext::UsageError& e) {
    std::cerr << "hrext: " << e.what() << '\n';
    return 2;
  } catch (const hrext::DomainError& e) {
    std::cerr << "hrext: " << e.what() << '\n';
    return 2;
  } catch (const hrext::ModelError& e) {
    std::cerr << "hrext: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hrext: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

#include "hrext/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "hrext/norming.hpp"
#include "hrext/parallel.hpp"
#include "hrext/rng.hpp"

#ifndef HREXT_VERSION
#define HREXT_VERSION "0.0.0"
#endif

namespace hrext {

using nlohmann::json;

std::string version() { return HREXT_VERSION; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& raw, const char* what) {
  const std::string s = trim(raw);
  if (s == "inf" || s == "+inf" || s == "Inf" || s == "infinity") return kInf;
  if (s == "-inf" || s == "-Inf") return -kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError(std::string("invalid ") + what + ": '" + raw + "'");
  }
  if (used != s.size() || std::isnan(v)) throw UsageError(std::string("invalid ") + what + ": '" + raw + "'");
  return v;
}

std::int64_t parse_count(const std::string& raw, const char* what) {
  const double v = parse_double(raw, what);
  if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 9.0e18)
    throw UsageError(std::string("invalid ") + what + ": '" + raw + "' is not an integer");
  return static_cast<std::int64_t>(v);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no infinity literal; infinite coordinates travel as "inf" / "-inf"
json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j, const char* what) {
  if (j.is_string()) return parse_double(j.get<std::string>(), what);
  return j.get<double>();
}

std::string grid_string(const GridSpec& g) {
  return format_double(g.lo) + ":" + format_double(g.hi) + ":" + std::to_string(g.count);
}

}  // namespace

// ---------------------------------------------------------------------------------------------

HrParam parse_lambda(const std::string& s) {
  const double v = parse_double(s, "lambda");
  if (v < 0.0) throw UsageError("invalid lambda: '" + s + "' is negative");
  return HrParam(v);
}

GridSpec parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() < 2 || parts.size() > 3) throw UsageError("invalid grid '" + s + "', expected lo:hi[:count]");
  GridSpec g;
  g.lo = parse_double(parts[0], "grid lower end");
  g.hi = parse_double(parts[1], "grid upper end");
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || g.hi < g.lo)
    throw UsageError("invalid grid '" + s + "', need finite lo <= hi");
  if (parts.size() == 3) {
    const std::int64_t c = parse_count(parts[2], "grid count");
    if (c < 1 || c > 1000) throw UsageError("invalid grid count in '" + s + "'");
    g.count = static_cast<int>(c);
  } else {
    g.count = g.hi > g.lo ? 2 : 1;
  }
  if (g.count > 1 && !(g.hi > g.lo)) throw UsageError("invalid grid '" + s + "', count > 1 needs lo < hi");
  return g;
}

std::vector<std::int64_t> parse_ngrid(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& part : split(s, ',')) {
    const std::int64_t n = parse_count(part, "n grid entry");
    if (n < 2) throw UsageError("n grid entries must be >= 2");
    out.push_back(n);
  }
  if (out.empty()) throw UsageError("empty n grid");
  return out;
}

std::array<double, 3> parse_tau(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw UsageError("invalid tau '" + s + "', expected t11,t22,t12");
  std::array<double, 3> t{};
  for (int i = 0; i < 3; ++i) {
    t[i] = parse_double(parts[i], "tau");
    if (!(t[i] > 0.0) || !std::isfinite(t[i])) throw UsageError("tau entries must be positive and finite");
  }
  return t;
}

Coupling parse_coupling(const std::string& s) {
  if (s == "indep") return Coupling::independent();
  if (s.rfind("shared:", 0) == 0) {
    const double c = parse_double(s.substr(7), "coupling weight");
    if (!(c >= 0.0 && c < 1.0)) throw UsageError("shared coupling weight must lie in [0, 1)");
    return Coupling::shared(c);
  }
  throw UsageError("invalid coupling '" + s + "', expected indep or shared:C");
}

std::vector<GumbelPoint> parse_points(const std::string& s) {
  std::vector<GumbelPoint> out;
  for (const auto& item : split(s, ';')) {
    const auto xy = split(item, ',');
    if (xy.size() != 2) throw UsageError("invalid point '" + item + "', expected x,y");
    out.push_back({parse_double(xy[0], "point"), parse_double(xy[1], "point")});
  }
  if (out.empty()) throw UsageError("no points given");
  return out;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw UsageError("invalid format '" + s + "', expected csv or json");
}

// ---------------------------------------------------------------------------------------------

RunConfig resolve_defaults(RunConfig cfg) {
  const std::vector<std::int64_t> decades_hi{1000, 10000, 100000, 1000000};
  const std::vector<std::int64_t> decades_lo{100, 1000, 10000, 100000};
  if (cfg.command == "hr-eval") {
    if (!cfg.grid) cfg.grid = GridSpec{-2.0, 4.0, 9};
    return cfg;
  }
  if (cfg.command != "verify") throw UsageError("unknown command '" + cfg.command + "'");
  const std::string& t = cfg.target;
  if (t == "weak" || t == "strong") {
    if (!cfg.n) cfg.n = 2000;
    if (!cfg.reps) cfg.reps = 10000;
    if (!cfg.grid) cfg.grid = GridSpec{-2.0, 4.0, 9};
    if (t == "strong" && !cfg.tau) cfg.tau = std::array<double, 3>{1.0, 1.0, 0.8};
  } else if (t == "maxmin") {
    if (!cfg.n) cfg.n = 2000;
    if (!cfg.reps) cfg.reps = 20000;
    if (!cfg.grid) cfg.grid = GridSpec{0.5, 1.5, 2};
    if (cfg.grid->count > 3) throw UsageError("maxmin grid may have at most 3 points per axis");
  } else if (t == "aslt") {
    if (!cfg.n) cfg.n = 20000;
    if (!cfg.reps) cfg.reps = 10;
    if (cfg.points.empty()) cfg.points = {{0.0, 0.0}, {1.0, 1.0}};
  } else if (t == "bounds") {
    if (cfg.kind != "L1" && cfg.kind != "L2" && cfg.kind != "eq13" && cfg.kind != "eq14")
      throw UsageError("invalid bound kind '" + cfg.kind + "', expected L1, L2, eq13 or eq14");
    if (cfg.n_grid.empty()) cfg.n_grid = (cfg.kind == "L1" || cfg.kind == "L2") ? decades_hi : decades_lo;
    if (cfg.points.empty()) cfg.points = {{0.0, 0.0}};
  } else {
    throw UsageError("unknown verify target '" + t + "', expected weak, strong, maxmin, aslt or bounds");
  }
  if (cfg.reps && *cfg.reps < 1) throw UsageError("--reps must be >= 1");
  if (cfg.n && *cfg.n < 2) throw UsageError("--n must be >= 2");
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["target"] = cfg.target;
  j["lambda"] = cfg.lambda;
  j["phi"] = cfg.phi;
  j["tau"] = cfg.tau ? json(*cfg.tau) : json(nullptr);
  j["n"] = cfg.n ? json(*cfg.n) : json(nullptr);
  j["n_grid"] = cfg.n_grid;
  j["reps"] = cfg.reps ? json(*cfg.reps) : json(nullptr);
  j["grid"] = cfg.grid ? json(grid_string(*cfg.grid)) : json(nullptr);
  j["seed"] = cfg.seed;
  j["format"] = cfg.format == OutputFormat::Csv ? "csv" : "json";
  j["tol"] = cfg.tol ? json(*cfg.tol) : json(nullptr);
  j["coupling"] = cfg.coupling;
  j["epsilon"] = cfg.epsilon;
  j["kind"] = cfg.kind;
  json pts = json::array();
  for (const auto& p : cfg.points) pts.push_back({number_json(p.x), number_json(p.y)});
  j["points"] = pts;
  j["allow_large"] = cfg.allow_large;
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::vector<std::string> known{"command", "target", "lambda",   "phi",   "tau",    "n",
                                              "n_grid",  "reps",   "grid",     "seed",  "out",    "format",
                                              "tol",     "coupling", "epsilon", "kind", "points", "allow_large",
                                              "workers"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw UsageError("unknown config key '" + key + "'");
  RunConfig cfg;
  try {
    if (j.contains("command")) cfg.command = j.at("command").get<std::string>();
    if (j.contains("target")) cfg.target = j.at("target").get<std::string>();
    if (j.contains("lambda")) {
      const auto& l = j.at("lambda");
      if (l.is_number()) {
        cfg.lambda = format_double(l.get<double>());
      } else {
        cfg.lambda = l.get<std::string>();
      }
      parse_lambda(cfg.lambda);
    }
    if (j.contains("phi")) cfg.phi = j.at("phi").get<double>();
    if (j.contains("tau") && !j.at("tau").is_null()) cfg.tau = j.at("tau").get<std::array<double, 3>>();
    if (j.contains("n") && !j.at("n").is_null()) cfg.n = j.at("n").get<std::int64_t>();
    if (j.contains("n_grid")) cfg.n_grid = j.at("n_grid").get<std::vector<std::int64_t>>();
    if (j.contains("reps") && !j.at("reps").is_null()) cfg.reps = j.at("reps").get<std::int64_t>();
    if (j.contains("grid") && !j.at("grid").is_null()) cfg.grid = parse_grid(j.at("grid").get<std::string>());
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("format")) cfg.format = parse_format(j.at("format").get<std::string>());
    if (j.contains("tol") && !j.at("tol").is_null()) cfg.tol = j.at("tol").get<double>();
    if (j.contains("coupling")) {
      cfg.coupling = j.at("coupling").get<std::string>();
      parse_coupling(cfg.coupling);
    }
    if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
    if (j.contains("kind")) cfg.kind = j.at("kind").get<std::string>();
    if (j.contains("points"))
      for (const auto& p : j.at("points")) cfg.points.push_back({number_from_json(p.at(0), "point"), number_from_json(p.at(1), "point")});
    if (j.contains("allow_large")) cfg.allow_large = j.at("allow_large").get<bool>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

// ---------------------------------------------------------------------------------------------

namespace {

const char* branch_label(const HrParam& p) {
  switch (p.branch()) {
    case HrParam::Branch::Comonotone:
      return "lambda=0";
    case HrParam::Branch::Independent:
      return "lambda=inf";
    case HrParam::Branch::Finite:
      break;
  }
  return "finite";
}

Report start(const RunConfig& cfg, std::vector<std::string> columns) {
  Report r;
  r.config = cfg;
  r.columns = std::move(columns);
  return r;
}

void add_grid_table(Report& rep, const EmpiricalLaw2D& emp, const Eigen::MatrixXd& theory,
                    const Eigen::MatrixXd* baseline) {
  for (Eigen::Index i = 0; i < emp.grid_x.size(); ++i) {
    for (Eigen::Index j = 0; j < emp.grid_y.size(); ++j) {
      std::vector<Cell> row{emp.grid_x[i], emp.grid_y[j], emp.cdf(i, j), theory(i, j),
                            std::abs(emp.cdf(i, j) - theory(i, j))};
      if (baseline) row.push_back((*baseline)(i, j));
      rep.rows.push_back(std::move(row));
    }
  }
}

Report verify_weak(const RunConfig& cfg) {
  const HrParam lam = parse_lambda(cfg.lambda);
  const WeakAR1 model = make_weak_ar1(lam, cfg.phi);
  const Eigen::VectorXd g = cfg.grid->nodes();
  const auto theory_fn = [lam](double x, double y) { return hr_cdf(lam, x, y); };
  const EmpiricalLaw2D emp = empirical_max_law(model, *cfg.n, *cfg.reps, g, g, cfg.seed, cfg.workers);
  const Eigen::MatrixXd theory = evaluate_on_grid(g, g, theory_fn);
  const double dist = (emp.cdf - theory).cwiseAbs().maxCoeff();

  Report rep = start(cfg, {"x", "y", "empirical", "theory", "abs_diff"});
  double tolerance;
  if (cfg.tol) {
    tolerance = *cfg.tol;
    add_grid_table(rep, emp, theory, nullptr);
  } else {
    // iid-row baseline (phi = 0) at the same n, R and seed calibrates the finite-n bias
    const EmpiricalLaw2D base =
        empirical_max_law(make_weak_ar1(lam, 0.0), *cfg.n, *cfg.reps, g, g, cfg.seed, cfg.workers);
    const double d0 = (base.cdf - theory).cwiseAbs().maxCoeff();
    const double band = grid_mc_band(*cfg.reps, g.size() * g.size());
    tolerance = d0 + 3.0 * band;
    rep.columns.push_back("baseline_empirical");
    add_grid_table(rep, emp, theory, &base.cdf);
    rep.summary["baseline_distance"] = d0;
    rep.summary["mc_band"] = band;
  }
  rep.summary["sup_distance"] = dist;
  rep.summary["tolerance"] = tolerance;
  rep.passed = dist <= tolerance;
  return rep;
}

Report verify_strong(const RunConfig& cfg) {
  const HrParam lam = parse_lambda(cfg.lambda);
  const auto& t = *cfg.tau;
  const MixtureParams mp(t[0], t[1], t[2], lam);
  const Eigen::VectorXd g = cfg.grid->nodes();
  Eigen::VectorXd gy(g.size() + 1);
  gy << g, kInf;
  const EmpiricalLaw2D emp = empirical_max_law(StrongFactor{mp}, *cfg.n, *cfg.reps, g, gy, cfg.seed, cfg.workers);

  Report rep = start(cfg, {"x", "y", "empirical", "theory", "abs_diff"});
  double dist = 0.0, marginal = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    for (Eigen::Index j = 0; j < gy.size(); ++j) {
      const bool is_marginal = std::isinf(gy[j]);
      const double th = is_marginal ? univariate_mixture_cdf(mp.tau11(), g[i], 128) : mixture_limit_cdf(mp, g[i], gy[j]);
      const double d = std::abs(emp.cdf(i, j) - th);
      (is_marginal ? marginal : dist) = std::max(is_marginal ? marginal : dist, d);
      rep.rows.push_back({g[i], gy[j], emp.cdf(i, j), th, d});
    }
  }
  const double tolerance = cfg.tol.value_or(0.04);
  const double marginal_tol = 0.03;
  rep.summary["sup_distance"] = dist;
  rep.summary["tolerance"] = tolerance;
  rep.summary["marginal_distance"] = marginal;
  rep.summary["marginal_tolerance"] = marginal_tol;
  rep.summary["lambda_tilde"] = mp.lambda_tilde().lambda();
  rep.passed = dist <= tolerance && marginal <= marginal_tol;
  return rep;
}

Report verify_maxmin(const RunConfig& cfg) {
  const HrParam lam = parse_lambda(cfg.lambda);
  const WeakAR1 model = make_weak_ar1(lam, cfg.phi);
  const Eigen::VectorXd g = cfg.grid->nodes();
  const std::vector<double> axis(g.data(), g.data() + g.size());
  const Grid4 grid{axis, axis, axis, axis};
  const EmpiricalMaxMin emp = empirical_maxmin_law(model, *cfg.n, *cfg.reps, grid, cfg.seed, cfg.workers);

  Report rep = start(cfg, {"x1", "x2", "y1", "y2", "empirical", "theory", "abs_diff"});
  double dist = 0.0;
  for (std::size_t a = 0; a < axis.size(); ++a)
    for (std::size_t b = 0; b < axis.size(); ++b)
      for (std::size_t c = 0; c < axis.size(); ++c)
        for (std::size_t d = 0; d < axis.size(); ++d) {
          const double th = hr_cdf(lam, axis[a], axis[b]) * hr_cdf(lam, axis[c], axis[d]);
          const double e = emp.at(a, b, c, d);
          dist = std::max(dist, std::abs(e - th));
          rep.rows.push_back({axis[a], axis[b], axis[c], axis[d], e, th, std::abs(e - th)});
        }
  const double tolerance = cfg.tol.value_or(0.04);
  rep.summary["sup_distance"] = dist;
  rep.summary["tolerance"] = tolerance;
  rep.passed = dist <= tolerance;
  return rep;
}

double sample_sd(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

Report verify_aslt(const RunConfig& cfg) {
  const HrParam lam = parse_lambda(cfg.lambda);
  const WeakAR1 model = make_weak_ar1(lam, cfg.phi);
  const Coupling coupling = parse_coupling(cfg.coupling);
  const std::int64_t paths = *cfg.reps;
  if (paths < 2) throw UsageError("aslt needs --reps >= 2 paths");
  std::vector<AsltMaxMinPoint> mm;
  for (const auto& p : cfg.points) mm.push_back({p.x, p.y, p.x, p.y});

  std::vector<AsltResult> results(static_cast<std::size_t>(paths));
  parallel_chunks(paths, cfg.workers, [&](std::int64_t begin, std::int64_t end, int) {
    for (std::int64_t p = begin; p < end; ++p)
      results[p] = aslt_average(model, coupling, *cfg.n, cfg.points, mm, child_seed(cfg.seed, p), cfg.allow_large);
  });

  Report rep = start(cfg, {"path", "event", "x", "y", "n", "average", "target", "ceiling"});
  const double tolerance = cfg.tol.value_or(0.12);
  bool ok = true;
  bool ceiling_ok = true;
  double worst = 0.0;
  json spread = json::array();
  for (int event = 0; event < 2; ++event) {
    for (std::size_t q = 0; q < cfg.points.size(); ++q) {
      const GumbelPoint pt = cfg.points[q];
      const double target = event == 0 ? hr_cdf(lam, pt.x, pt.y) : hr_cdf(lam, pt.x, pt.y) * hr_cdf(lam, pt.x, pt.y);
      std::vector<double> final_avg, quarter_avg;
      for (std::int64_t p = 0; p < paths; ++p) {
        const AsltResult& r = results[p];
        const auto& avg = event == 0 ? r.max_average[q] : r.maxmin_average[q];
        for (std::size_t c = 0; c < r.checkpoints.size(); ++c)
          rep.rows.push_back({p, std::string(event == 0 ? "max" : "maxmin"), pt.x, pt.y, r.checkpoints[c], avg[c],
                              target, r.ceiling[c]});
        ceiling_ok = ceiling_ok && r.ceiling_held;
        quarter_avg.push_back(avg[1]);
        final_avg.push_back(avg.back());
        worst = std::max(worst, std::abs(avg.back() - target));
        if (std::abs(avg.back() - target) > tolerance) ok = false;
      }
      const double sd_final = sample_sd(final_avg);
      const double sd_quarter = sample_sd(quarter_avg);
      if (!(sd_final < sd_quarter)) ok = false;
      spread.push_back({{"event", event == 0 ? "max" : "maxmin"},
                        {"x", pt.x},
                        {"y", pt.y},
                        {"sd_quarter", sd_quarter},
                        {"sd_final", sd_final}});
    }
  }
  rep.summary["max_final_deviation"] = worst;
  rep.summary["tolerance"] = tolerance;
  rep.summary["seed_spread"] = spread;
  rep.summary["ceiling_held"] = ceiling_ok;
  rep.summary["first_row"] = results.front().first_row;
  rep.passed = ok && ceiling_ok;
  return rep;
}

Report verify_bounds(const RunConfig& cfg) {
  const HrParam lam = parse_lambda(cfg.lambda);
  ArrayModel model = cfg.tau ? ArrayModel(StrongFactor{MixtureParams((*cfg.tau)[0], (*cfg.tau)[1], (*cfg.tau)[2], lam)})
                             : ArrayModel(make_weak_ar1(lam, cfg.phi));
  const GumbelPoint pt = cfg.points.front();
  if (cfg.kind == "L1" || cfg.kind == "L2") {
    const BoundSeries s = comparison_bound_series(model, cfg.kind == "L1" ? BoundKind::L1 : BoundKind::L2, pt.x, pt.y,
                                                  cfg.n_grid);
    Report rep = start(cfg, {"n", "value"});
    for (std::size_t i = 0; i < s.n_grid.size(); ++i) rep.rows.push_back({s.n_grid[i], s.values[i]});
    const bool all_zero = std::all_of(s.values.begin(), s.values.end(), [](double v) { return v == 0.0; });
    const bool decreasing = eventually_decreasing(s.values);
    rep.summary["omega_rule"] = s.omega_rule;
    rep.summary["identically_zero"] = all_zero;
    rep.summary["decreasing"] = decreasing;
    rep.passed = all_zero || decreasing;
    if (cfg.tol) {
      rep.summary["tolerance"] = *cfg.tol;
      rep.passed = rep.passed && s.values.back() < *cfg.tol;
    }
    return rep;
  }
  const AsltBoundRate r = aslt_bound_rate(model, parse_coupling(cfg.coupling), cfg.epsilon, pt.x, pt.y, cfg.n_grid);
  Report rep = start(cfg, {"n", "within_row", "within_ratio", "cross_row", "cross_ratio"});
  for (std::size_t i = 0; i < r.within_row.n_grid.size(); ++i)
    rep.rows.push_back({r.within_row.n_grid[i], r.within_row.values[i], r.within_ratio[i], r.cross_row.values[i],
                        r.cross_ratio[i]});
  rep.summary["omega_rule"] = r.within_row.omega_rule;
  rep.summary["bounded"] = r.bounded;
  rep.passed = r.bounded;
  return rep;
}

}  // namespace

Report run_hr_eval(const RunConfig& raw) {
  const RunConfig cfg = resolve_defaults(raw);
  const HrParam lam = parse_lambda(cfg.lambda);
  const Eigen::VectorXd g = cfg.grid->nodes();
  Report rep = start(cfg, {"x", "y", "branch", "H", "V"});
  for (Eigen::Index i = 0; i < g.size(); ++i)
    for (Eigen::Index j = 0; j < g.size(); ++j)
      rep.rows.push_back({g[i], g[j], std::string(branch_label(lam)), hr_cdf(lam, g[i], g[j]),
                          hr_exponent(lam, g[i], g[j])});
  rep.summary["rows"] = static_cast<std::int64_t>(rep.rows.size());
  return rep;
}

Report run_verify(const RunConfig& raw) {
  const RunConfig cfg = resolve_defaults(raw);
  if (cfg.target == "weak") return verify_weak(cfg);
  if (cfg.target == "strong") return verify_strong(cfg);
  if (cfg.target == "maxmin") return verify_maxmin(cfg);
  if (cfg.target == "aslt") return verify_aslt(cfg);
  return verify_bounds(cfg);
}

// ---------------------------------------------------------------------------------------------

namespace {

std::string csv_field(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return number_json(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

std::string to_csv(const Report& report) {
  std::string out;
  out += "# hrext " + version() + "\r\n";
  out += "# config " + config_to_json(report.config).dump() + "\r\n";
  for (std::size_t i = 0; i < report.columns.size(); ++i) out += (i ? "," : "") + report.columns[i];
  out += "\r\n";
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
    out += "\r\n";
  }
  json summary = report.summary;
  summary["passed"] = report.passed;
  out += "# summary " + summary.dump() + "\r\n";
  return out;
}

json to_json(const Report& report) {
  json j;
  j["tool"] = "hrext";
  j["version"] = version();
  j["config"] = config_to_json(report.config);
  j["columns"] = report.columns;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["summary"] = report.summary;
  j["passed"] = report.passed;
  return j;
}

std::string render(const Report& report) {
  if (report.config.format == OutputFormat::Json) return to_json(report).dump(2) + "\n";
  return to_csv(report);
}

}  // namespace hrext

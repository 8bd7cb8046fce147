// Acceptance gate: one PASS/FAIL line per criterion. With a criterion number as argument only that
// criterion runs; the exit code is nonzero when any selected criterion fails.

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hrext/evd_core.hpp"
#include "hrext/experiments.hpp"
#include "hrext/gauss_arrays.hpp"
#include "hrext/norming.hpp"
#include "hrext/report.hpp"
#include "hrext/rng.hpp"

#ifndef HREXT_CLI_PATH
#define HREXT_CLI_PATH "hrext"
#endif

using namespace hrext;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> grid9() {
  std::vector<double> g;
  for (int i = 0; i < 9; ++i) g.push_back(-2.0 + 0.75 * i);
  return g;
}

using Big = boost::multiprecision::cpp_dec_float_50;

double oracle_hr_cdf(double lambda, double x, double y) {
  using boost::multiprecision::erfc;
  using boost::multiprecision::exp;
  using boost::multiprecision::sqrt;
  const Big l(lambda), bx(x), by(y), r2 = sqrt(Big(2));
  const auto phi = [&](const Big& z) { return erfc(-z / r2) / 2; };
  const Big v = phi(l + (bx - by) / (2 * l)) * exp(-by) + phi(l + (by - bx) / (2 * l)) * exp(-bx);
  return static_cast<double>(exp(-v));
}

Outcome c1_exactness() {
  std::mt19937_64 gen(20261015);
  std::uniform_real_distribution<double> lam(0.05, 5.0), pt(-3.0, 6.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double l = lam(gen), x = pt(gen), y = pt(gen);
    const double want = oracle_hr_cdf(l, x, y);
    worst = std::max(worst, std::abs(hr_cdf(HrParam(l), x, y) - want) / want);
  }
  bool edges = true;
  for (double x : grid9())
    for (double y : grid9()) {
      edges = edges && hr_cdf(HrParam(0.0), x, y) == std::min(gumbel_cdf(x), gumbel_cdf(y));
      edges = edges && hr_cdf(HrParam::infinity(), x, y) == std::exp(-(std::exp(-x) + std::exp(-y)));
    }
  return {worst <= 1e-12 && edges,
          "max relative error " + fmt("%.2e", worst) + " (limit 1e-12), edge branches exact: " + (edges ? "yes" : "no")};
}

Outcome c2_max_stability() {
  double worst = 0.0;
  for (double l : {0.25, 1.0, 4.0})
    for (double t : {2.0, 3.0, 10.0})
      for (double x : grid9())
        for (double y : grid9())
          worst = std::max(worst, std::abs(std::pow(hr_cdf(HrParam(l), x + std::log(t), y + std::log(t)), t) -
                                           hr_cdf(HrParam(l), x, y)));
  return {worst <= 1e-10, "max deviation " + fmt("%.2e", worst) + " (limit 1e-10)"};
}

double ks_gumbel(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = gumbel_cdf(v[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

Outcome c3_sampler() {
  const std::int64_t n = 100000;
  const double ks_crit = 1.9495 / std::sqrt(static_cast<double>(n));  // level 0.001
  double worst_cdf = 0.0, worst_ks = 0.0;
  for (double l : {0.5, 2.0}) {
    const auto s = hr_sample(HrParam(l), n, 4242);
    for (double x : grid9())
      for (double y : grid9()) {
        const double emp = ((s.col(0).array() <= x) && (s.col(1).array() <= y)).cast<double>().mean();
        worst_cdf = std::max(worst_cdf, std::abs(emp - hr_cdf(HrParam(l), x, y)));
      }
    for (int c = 0; c < 2; ++c) {
      std::vector<double> col(s.col(c).data(), s.col(c).data() + n);
      worst_ks = std::max(worst_ks, ks_gumbel(col));
    }
  }
  return {worst_cdf <= 0.01 && worst_ks <= ks_crit,
          "max CDF error " + fmt("%.4f", worst_cdf) + " (limit 0.01), max KS " + fmt("%.4f", worst_ks) +
              " (critical " + fmt("%.4f", ks_crit) + ")"};
}

Outcome c4_weak() {
  bool ok = true;
  std::string detail;
  for (const char* lam : {"1", "0.5", "2"}) {
    RunConfig cfg;
    cfg.target = "weak";
    cfg.lambda = lam;
    cfg.phi = 0.5;
    cfg.n = 2000;
    cfg.reps = 10000;
    cfg.seed = 7;
    const Report r = run_verify(cfg);
    ok = ok && r.passed;
    detail += std::string(detail.empty() ? "" : "; ") + "lambda=" + lam + ": D=" +
              fmt("%.4f", r.summary.at("sup_distance").get<double>()) + " vs D0+3band=" +
              fmt("%.4f", r.summary.at("tolerance").get<double>());
  }
  return {ok, detail};
}

Outcome c5_strong() {
  RunConfig cfg;
  cfg.target = "strong";
  cfg.tau = std::array<double, 3>{1.0, 1.0, 0.8};
  cfg.lambda = "1";
  cfg.n = 2000;
  cfg.reps = 10000;
  cfg.seed = 7;
  const Report r = run_verify(cfg);

  // independent Monte Carlo estimate of the mixture expectation
  const MixtureParams mp(1.0, 1.0, 0.8, HrParam(1.0));
  const HrParam lt = mp.lambda_tilde();
  const double rho = mp.zw_correlation(), s1 = std::sqrt(2.0 * mp.tau11()), s2 = std::sqrt(2.0 * mp.tau22());
  double worst_z = 0.0;
  int point = 0;
  for (auto [x, y] : std::vector<std::pair<double, double>>{{0.0, 0.0}, {1.0, 1.0}, {-1.0, 2.0}}) {
    Engine eng = make_engine(child_seed(555, point++));
    std::normal_distribution<double> gauss;
    const int draws = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (int d = 0; d < draws; ++d) {
      const double z = gauss(eng);
      const double w = rho * z + std::sqrt(1.0 - rho * rho) * gauss(eng);
      const double h = hr_cdf(lt, x + mp.tau11() - s1 * z, y + mp.tau22() - s2 * w);
      sum += h;
      sum2 += h * h;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
    worst_z = std::max(worst_z, std::abs(mixture_limit_cdf(mp, x, y) - mean) / se);
  }
  const double dist = r.summary.at("sup_distance").get<double>();
  const double marg = r.summary.at("marginal_distance").get<double>();
  return {r.passed && worst_z <= 3.0,
          "sup distance " + fmt("%.4f", dist) + " (limit 0.04), marginal " + fmt("%.4f", marg) +
              " (limit 0.03), quadrature vs MC " + fmt("%.2f", worst_z) + " SE (limit 3)"};
}

Outcome c6_maxmin() {
  RunConfig cfg;
  cfg.target = "maxmin";
  cfg.lambda = "1";
  cfg.phi = 0.5;
  cfg.n = 2000;
  cfg.reps = 20000;
  cfg.grid = GridSpec{0.5, 1.5, 2};
  cfg.seed = 7;
  const Report r = run_verify(cfg);
  return {r.passed, "sup distance " + fmt("%.4f", r.summary.at("sup_distance").get<double>()) + " (limit 0.04)"};
}

Outcome c7_aslt() {
  RunConfig cfg;
  cfg.target = "aslt";
  cfg.lambda = "1";
  cfg.phi = 0.5;
  cfg.n = 20000;
  cfg.reps = 10;
  cfg.points = {{0.0, 0.0}, {1.0, 1.0}};
  cfg.seed = 7;
  const Report r = run_verify(cfg);
  std::string spread;
  for (const auto& s : r.summary.at("seed_spread"))
    spread += " " + s.at("event").get<std::string>() + "(" + fmt("%g", s.at("x").get<double>()) + "):" +
              fmt("%.4f", s.at("sd_quarter").get<double>()) + "->" + fmt("%.4f", s.at("sd_final").get<double>());
  return {r.passed, "max final deviation " + fmt("%.4f", r.summary.at("max_final_deviation").get<double>()) +
                        " (limit 0.12), ceiling held: " + (r.summary.at("ceiling_held").get<bool>() ? "yes" : "no") +
                        ", sd n/4->n:" + spread};
}

Outcome c8_bounds() {
  const std::vector<std::int64_t> grid{1000, 10000, 100000, 1000000};
  const BoundSeries l1 = comparison_bound_series(make_weak_ar1(HrParam(1.0), 0.5), BoundKind::L1, 0.0, 0.0, grid);
  bool strictly = true;
  for (std::size_t i = 1; i < l1.values.size(); ++i) strictly = strictly && l1.values[i] < l1.values[i - 1];
  const bool small = l1.values.back() < 1e-2;

  const ArrayModel strong = StrongFactor{MixtureParams(1.0, 1.0, 0.8, HrParam(1.0))};
  const BoundSeries l2 = comparison_bound_series(strong, BoundKind::L2, 0.0, 0.0, grid);
  const bool zero = std::all_of(l2.values.begin(), l2.values.end(), [](double v) { return v == 0.0; });

  const AsltBoundRate rate = aslt_bound_rate(make_weak_ar1(HrParam(1.0), 0.5), Coupling::independent(), 0.1, 0.0,
                                             0.0, std::vector<std::int64_t>{100, 1000, 10000, 100000});
  std::string series;
  for (double v : l1.values) series += " " + fmt("%.4g", v);
  return {strictly && small && zero && rate.bounded,
          "L1 at (0,0):" + series + " (strictly decreasing: " + (strictly ? "yes" : "no") + ", final < 1e-2: " +
              (small ? "yes" : "no") + "), L2 identically 0: " + (zero ? "yes" : "no") +
              ", eq13 ratio bounded: " + (rate.bounded ? "yes" : "no")};
}

Outcome c9_assumptions() {
  struct Setting {
    double phi, alpha;
    std::vector<std::int64_t> grid;
  };
  // alpha must stay below (1 - phi) / (1 + phi); the cutoff n^alpha has to outgrow ln ln n
  const std::vector<Setting> settings{{0.3, 0.5, {100, 10000, 1000000}},
                                      {0.6, 0.2, {100000, 10000000000LL, 1000000000000000LL}},
                                      {0.9, 0.05, {1000000000000000LL, 10000000000000000LL, 100000000000000000LL}}};
  bool weak_ok = true;
  int checked = 0;
  for (const auto& s : settings)
    for (double l : {0.5, 1.0, 2.0}) {
      weak_ok = weak_ok && validate_assumption(make_weak_ar1(HrParam(l), s.phi), Assumption::A1, s.grid, s.alpha).decaying;
      ++checked;
    }
  const ArrayModel strong = StrongFactor{MixtureParams(1.0, 1.0, 0.8, HrParam(1.0))};
  const bool strong_flagged =
      !validate_assumption(strong, Assumption::A1, std::vector<std::int64_t>{100, 1000, 10000}, 0.05).decaying;
  const ArrayModel lit = explicit_log_decay(MixtureParams(0.3, 0.3, 0.2, HrParam(1.0)));
  const AssumptionReport a2 = validate_assumption(lit, Assumption::A2, std::vector<std::int64_t>{100, 1000, 4000}, 0.3);
  const bool exact_zero = std::all_of(a2.statistic.begin(), a2.statistic.end(), [](double v) { return v == 0.0; });
  return {weak_ok && strong_flagged && exact_zero,
          "A1 true for " + std::to_string(checked) + " WeakAR1 settings: " + (weak_ok ? "yes" : "no") +
              ", A1 false for StrongFactor: " + (strong_flagged ? "yes" : "no") +
              ", A2 statistic exactly 0: " + (exact_zero ? "yes" : "no")};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome c10_determinism() {
  const std::string base = std::string(HREXT_CLI_PATH) +
                           " verify weak --lambda 1 --phi 0.5 --n 2000 --reps 10000 --seed 7 --format csv";
  const std::string a = "acceptance_det_w1.csv", b = "acceptance_det_w4.csv";
  const int ra = std::system((base + " --workers 1 --out " + a).c_str());
  const int rb = std::system((base + " --workers 4 --out " + b).c_str());
  const std::string sa = slurp(a), sb = slurp(b);
  std::remove(a.c_str());
  std::remove(b.c_str());
  const bool ran = ra != -1 && rb != -1 && !sa.empty();
  const bool same = ran && sa == sb;
  return {same, "CSV " + std::to_string(sa.size()) + " bytes, byte-identical across 1 and 4 workers: " +
                    (same ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "evd_core exactness", 1.0, c1_exactness},
      {2, "max-stability", 1.0, c2_max_stability},
      {3, "sampler fidelity", 30.0, c3_sampler},
      {4, "weak dependence limit", 300.0, c4_weak},
      {5, "strong dependence mixture limit", 300.0, c5_strong},
      {6, "max-min independence", 300.0, c6_maxmin},
      {7, "almost sure limit of log averages", 600.0, c7_aslt},
      {8, "comparison-lemma series", 10.0, c8_bounds},
      {9, "assumption validators", 5.0, c9_assumptions},
      {10, "determinism across workers", 600.0, c10_determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool ok = out.passed && in_time;
    failures += ok ? 0 : 1;
    std::printf("criterion %2d %s  %s [%.2f s, limit %.0f s%s]: %s\n", c.id, ok ? "PASS" : "FAIL", c.name.c_str(), secs,
                c.time_limit_s, in_time ? "" : ", exceeded", out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

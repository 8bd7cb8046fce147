#include "hrext/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hrext/norming.hpp"
#include "hrext/parallel.hpp"
#include "hrext/quadrature.hpp"
#include "hrext/rng.hpp"

namespace hrext {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

void require_replications(std::int64_t r) {
  if (r < 1) throw DomainError("replication count must be >= 1");
}

// First index with grid[i] >= value (grid sorted ascending).
Eigen::Index first_at_or_above(const Eigen::VectorXd& grid, double value) {
  const double* begin = grid.data();
  return std::lower_bound(begin, begin + grid.size(), value) - begin;
}

}  // namespace

Eigen::VectorXd GridSpec::nodes() const {
  if (count < 1) throw DomainError("grid count must be >= 1");
  if (count == 1) return Eigen::VectorXd::Constant(1, lo);
  if (!(hi > lo)) throw DomainError("grid needs hi > lo");
  return Eigen::VectorXd::LinSpaced(count, lo, hi);
}

EmpiricalLaw2D empirical_max_law(const ArrayModel& model, std::int64_t n, std::int64_t replications,
                                 const Eigen::VectorXd& grid_x, const Eigen::VectorXd& grid_y,
                                 std::uint64_t seed, int workers) {
  require_replications(replications);
  if (!std::is_sorted(grid_x.data(), grid_x.data() + grid_x.size()) ||
      !std::is_sorted(grid_y.data(), grid_y.data() + grid_y.size()))
    throw DomainError("empirical_max_law: grids must be sorted");
  const RowSampler sampler(model, n);
  const Norming nm = norming_constants(n);

  std::vector<CountMatrix> partial(std::max(1, workers));
  parallel_chunks(replications, workers, [&](std::int64_t begin, std::int64_t end, int w) {
    CountMatrix counts = CountMatrix::Zero(grid_x.size(), grid_y.size());
    RowSample row;
    for (std::int64_t r = begin; r < end; ++r) {
      sampler.sample_into(child_seed(seed, static_cast<std::uint64_t>(r)), row);
      const Extremes ex = row_extremes(row);
      const Eigen::Index ix = first_at_or_above(grid_x, nm.normalize(ex.max1));
      const Eigen::Index iy = first_at_or_above(grid_y, nm.normalize(ex.max2));
      if (ix < grid_x.size() && iy < grid_y.size())
        counts.bottomRightCorner(grid_x.size() - ix, grid_y.size() - iy).array() += 1;
    }
    partial[w] = std::move(counts);
  });

  CountMatrix total = CountMatrix::Zero(grid_x.size(), grid_y.size());
  for (const auto& c : partial)
    if (c.size() != 0) total += c;

  EmpiricalLaw2D emp;
  emp.grid_x = grid_x;
  emp.grid_y = grid_y;
  emp.cdf = total.cast<double>() / static_cast<double>(replications);
  emp.replications = replications;
  emp.n = n;
  emp.master_seed = seed;
  return emp;
}

Eigen::MatrixXd evaluate_on_grid(const Eigen::VectorXd& grid_x, const Eigen::VectorXd& grid_y,
                                 const Theory2D& theory) {
  Eigen::MatrixXd out(grid_x.size(), grid_y.size());
  for (Eigen::Index i = 0; i < grid_x.size(); ++i)
    for (Eigen::Index j = 0; j < grid_y.size(); ++j) out(i, j) = theory(grid_x[i], grid_y[j]);
  return out;
}

double sup_distance(const EmpiricalLaw2D& emp, const Theory2D& theory) {
  return (emp.cdf - evaluate_on_grid(emp.grid_x, emp.grid_y, theory)).cwiseAbs().maxCoeff();
}

double grid_mc_band(std::int64_t replications, std::int64_t nodes) {
  require_replications(replications);
  return std::sqrt(std::log(2.0 * static_cast<double>(nodes)) / (2.0 * static_cast<double>(replications)));
}

// ---------------------------------------------------------------------------------------------

double mixture_limit_cdf(const MixtureParams& mp, double x, double y, int nodes) {
  if (nodes < 8) throw DomainError("mixture_limit_cdf: nodes must be >= 8");
  const double rho = mp.zw_correlation();
  if (rho > 1.0 + 1e-15) throw DomainError("mixture_limit_cdf: |corr(Z, W)| > 1");
  const double rho_c = std::min(rho, 1.0);
  const double orth = std::sqrt(std::max(0.0, 1.0 - rho_c * rho_c));
  const HrParam lt = mp.lambda_tilde();
  const double s1 = std::sqrt(2.0 * mp.tau11());
  const double s2 = std::sqrt(2.0 * mp.tau22());
  const double x0 = x + mp.tau11();
  const double y0 = y + mp.tau22();

  const GaussHermiteRule& gh = gauss_hermite(nodes);
  double total = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double z = gh.nodes[i];
    double inner = 0.0;
    for (int j = 0; j < nodes; ++j) {
      const double w = rho_c * z + orth * gh.nodes[j];
      inner += gh.weights[j] * hr_cdf(lt, x0 - s1 * z, y0 - s2 * w);
    }
    total += gh.weights[i] * inner;
  }
  return std::clamp(total, 0.0, 1.0);
}

double mixture_limit_cdf(const MixtureParams& mp, double x, double y) {
  int nodes = 32;
  double prev = mixture_limit_cdf(mp, x, y, nodes);
  while (nodes < 512) {
    nodes *= 2;
    const double next = mixture_limit_cdf(mp, x, y, nodes);
    if (std::abs(next - prev) < 1e-10) return next;
    prev = next;
  }
  return prev;
}

double univariate_mixture_cdf(double tau11, double x, int nodes) {
  if (nodes < 8) throw DomainError("univariate_mixture_cdf: nodes must be >= 8");
  if (!(tau11 > 0.0)) throw DomainError("univariate_mixture_cdf: tau_11 must be positive");
  const GaussHermiteRule& gh = gauss_hermite(nodes);
  const double s = std::sqrt(2.0 * tau11);
  double total = 0.0;
  for (int i = 0; i < nodes; ++i) total += gh.weights[i] * gumbel_cdf(x + tau11 - s * gh.nodes[i]);
  return std::clamp(total, 0.0, 1.0);
}

// ---------------------------------------------------------------------------------------------

EmpiricalMaxMin empirical_maxmin_law(const ArrayModel& model, std::int64_t n, std::int64_t replications,
                                     const Grid4& grid, std::uint64_t seed, int workers) {
  require_replications(replications);
  if (grid.x1.empty() || grid.x2.empty() || grid.y1.empty() || grid.y2.empty())
    throw DomainError("empirical_maxmin_law: every axis needs at least one value");
  const RowSampler sampler(model, n);
  const Norming nm = norming_constants(n);

  EmpiricalMaxMin out;
  out.grid = grid;
  out.replications = replications;
  out.n = n;
  out.master_seed = seed;
  const std::size_t cells = grid.x1.size() * grid.x2.size() * grid.y1.size() * grid.y2.size();

  std::vector<std::vector<std::int64_t>> partial(std::max(1, workers));
  parallel_chunks(replications, workers, [&](std::int64_t begin, std::int64_t end, int w) {
    std::vector<std::int64_t> counts(cells, 0);
    RowSample row;
    for (std::int64_t r = begin; r < end; ++r) {
      sampler.sample_into(child_seed(seed, static_cast<std::uint64_t>(r)), row);
      const Extremes ex = row_extremes(row);
      const double hi1 = nm.normalize(ex.max1);
      const double hi2 = nm.normalize(ex.max2);
      // m > -u_n(y)  <=>  normalize(-m) < y
      const double lo1 = nm.normalize(-ex.min1);
      const double lo2 = nm.normalize(-ex.min2);
      for (std::size_t i1 = 0; i1 < grid.x1.size(); ++i1) {
        if (!(hi1 <= grid.x1[i1])) continue;
        for (std::size_t i2 = 0; i2 < grid.x2.size(); ++i2) {
          if (!(hi2 <= grid.x2[i2])) continue;
          for (std::size_t j1 = 0; j1 < grid.y1.size(); ++j1) {
            if (!(lo1 < grid.y1[j1])) continue;
            for (std::size_t j2 = 0; j2 < grid.y2.size(); ++j2)
              if (lo2 < grid.y2[j2]) ++counts[out.index(i1, i2, j1, j2)];
          }
        }
      }
    }
    partial[w] = std::move(counts);
  });

  out.prob.assign(cells, 0.0);
  std::vector<std::int64_t> total(cells, 0);
  for (const auto& c : partial)
    for (std::size_t i = 0; i < c.size(); ++i) total[i] += c[i];
  for (std::size_t i = 0; i < cells; ++i)
    out.prob[i] = static_cast<double>(total[i]) / static_cast<double>(replications);
  return out;
}

// ---------------------------------------------------------------------------------------------

Coupling Coupling::shared(double c) {
  if (!(c >= 0.0 && c < 1.0)) throw DomainError("shared coupling weight must lie in [0, 1)");
  return Coupling{Kind::SharedInnovations, c};
}

std::string Coupling::str() const {
  if (kind == Kind::IndependentRows) return "indep";
  std::ostringstream os;
  os.precision(17);
  os << "shared:" << c;
  return os.str();
}

AsltResult aslt_average(const ArrayModel& model, const Coupling& coupling, std::int64_t n_max,
                        std::span<const GumbelPoint> points, std::span<const AsltMaxMinPoint> maxmin_points,
                        std::uint64_t seed, bool allow_large) {
  if (n_max < 1000) throw DomainError("aslt_average: n_max must be >= 1000");
  if (n_max > kAsltMaxRows && !allow_large)
    throw DomainError("aslt_average: n_max above " + std::to_string(kAsltMaxRows) +
                      " costs O(n_max^2) draws; pass allow_large to run it");
  const WeakAR1* weak = std::get_if<WeakAR1>(&model);
  if (coupling.kind == Coupling::Kind::SharedInnovations && weak == nullptr)
    throw DomainError("aslt_average: shared innovations are defined for the WeakAR1 model only");

  AsltResult res;
  res.checkpoints = {n_max / 8, n_max / 4, n_max / 2, n_max};
  res.max_average.assign(points.size(), {});
  res.maxmin_average.assign(maxmin_points.size(), {});

  // rows below the model's domain (e.g. lambda^2 > 2 ln k) are skipped
  std::int64_t k0 = 2;
  for (;; ++k0) {
    if (k0 > res.checkpoints.front()) throw DomainError("aslt_average: model undefined on early rows");
    try {
      if (coupling.kind == Coupling::Kind::SharedInnovations) {
        const double rho0 = model_rho0(model, k0);
        if ((rho0 - coupling.c) / (1.0 - coupling.c) < -1.0 - 1e-12) continue;
      } else {
        RowSampler probe(model, k0);
      }
      break;
    } catch (const DomainError&) {
    }
  }
  res.first_row = k0;

  std::vector<double> shared;
  if (coupling.kind == Coupling::Kind::SharedInnovations) {
    Engine eng = make_engine(child_seed(seed, 0));
    std::normal_distribution<double> gauss;
    shared.resize(static_cast<std::size_t>(n_max));
    for (double& v : shared) v = gauss(eng);
  }

  std::vector<double> max_sum(points.size(), 0.0);
  std::vector<double> maxmin_sum(maxmin_points.size(), 0.0);
  double harmonic = 0.0;
  std::size_t next_cp = 0;
  RowSample row;
  for (std::int64_t k = k0; k <= n_max; ++k) {
    const std::uint64_t row_seed = child_seed(seed, static_cast<std::uint64_t>(k));
    if (coupling.kind == Coupling::Kind::SharedInnovations)
      row = sample_row_shared(*weak, k, shared, coupling.c, row_seed);
    else
      RowSampler(model, k).sample_into(row_seed, row);
    const Norming nm = norming_constants(k);
    const Extremes ex = row_extremes(row);
    const double hi1 = nm.normalize(ex.max1);
    const double hi2 = nm.normalize(ex.max2);
    const double lo1 = nm.normalize(-ex.min1);
    const double lo2 = nm.normalize(-ex.min2);
    const double weight = 1.0 / static_cast<double>(k);
    harmonic += weight;
    for (std::size_t p = 0; p < points.size(); ++p)
      if (hi1 <= points[p].x && hi2 <= points[p].y) max_sum[p] += weight;
    for (std::size_t p = 0; p < maxmin_points.size(); ++p) {
      const auto& q = maxmin_points[p];
      if (hi1 <= q.x1 && hi2 <= q.x2 && lo1 < q.y1 && lo2 < q.y2) maxmin_sum[p] += weight;
    }
    for (double s : max_sum)
      if (s > harmonic * (1.0 + 1e-12)) res.ceiling_held = false;
    for (double s : maxmin_sum)
      if (s > harmonic * (1.0 + 1e-12)) res.ceiling_held = false;

    while (next_cp < res.checkpoints.size() && res.checkpoints[next_cp] == k) {
      const double ln = std::log(static_cast<double>(k));
      for (std::size_t p = 0; p < points.size(); ++p) res.max_average[p].push_back(max_sum[p] / ln);
      for (std::size_t p = 0; p < maxmin_points.size(); ++p) res.maxmin_average[p].push_back(maxmin_sum[p] / ln);
      res.ceiling.push_back(harmonic / ln);
      ++next_cp;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------------------------

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::L1:
      return "L1";
    case BoundKind::L2:
      return "L2";
    case BoundKind::Eq13:
      return "eq13";
    case BoundKind::Eq14:
      return "eq14";
  }
  return "?";
}

namespace {

constexpr int kPairs[3][2] = {{1, 1}, {1, 2}, {2, 2}};

double omega(const Norming& nm, std::span<const double> args) {
  double w = kInf;
  for (double a : args) w = std::min(w, std::abs(nm.u(a)));
  return w;
}

std::string omega_rule(std::span<const double> args) {
  std::ostringstream os;
  os.precision(17);
  os << "w_n = min |u_n(a)| over a in {";
  for (std::size_t i = 0; i < args.size(); ++i) os << (i ? ", " : "") << args[i];
  os << "}";
  return os.str();
}

double pair_sum(const ArrayModel& model, BoundKind kind, double tau, int i, int j, std::int64_t n, double w2) {
  const double tau_n = kind == BoundKind::L2 ? tau_over_log(tau, n) : 0.0;
  double sum = 0.0;
  for (std::int64_t k = 1; k < n; ++k) {
    const double rho = induced_correlation(model, i, j, k, n);
    if (kind == BoundKind::L2) {
      const double diff = std::abs(rho - tau_n);
      if (diff == 0.0) continue;
      sum += diff * std::exp(-w2 / (1.0 + std::max(std::abs(rho), tau_n)));
    } else {
      const double r = std::abs(rho);
      if (r == 0.0) {
        // WeakAR1 correlations decay monotonically in k: once they underflow, every later term is 0
        if (std::holds_alternative<WeakAR1>(model)) break;
        continue;
      }
      sum += r * std::exp(-w2 / (1.0 + r));
    }
  }
  return static_cast<double>(n) * sum;
}

}  // namespace

BoundSeries comparison_bound_series(const ArrayModel& model, BoundKind kind, std::span<const double> args,
                                    std::span<const std::int64_t> n_grid) {
  if (kind != BoundKind::L1 && kind != BoundKind::L2)
    throw DomainError("comparison_bound_series: kind must be L1 or L2");
  if (args.empty()) throw DomainError("comparison_bound_series: no arguments for w_n");
  std::optional<TauConstants> tau;
  if (kind == BoundKind::L2) {
    tau = model_tau(model);
    if (!tau) throw DomainError("comparison_bound_series: L2 needs a model with tau constants");
  }
  BoundSeries out;
  out.kind = kind;
  out.omega_rule = omega_rule(args);
  out.n_grid.assign(n_grid.begin(), n_grid.end());
  for (std::int64_t n : n_grid) {
    const Norming nm = norming_constants(n);
    const double w = omega(nm, args);
    double best = 0.0;
    for (const auto& p : kPairs)
      best = std::max(best, pair_sum(model, kind, tau ? (*tau)(p[0], p[1]) : 0.0, p[0], p[1], n, w * w));
    out.values.push_back(best);
  }
  return out;
}

BoundSeries comparison_bound_series(const ArrayModel& model, BoundKind kind, double x, double y,
                                    std::span<const std::int64_t> n_grid) {
  const double args[2] = {x, y};
  return comparison_bound_series(model, kind, std::span<const double>(args), n_grid);
}

namespace {

// max_{2 <= m < n} m sum_{t=1}^{n} |gamma(t)| exp(-(w_m^2 + w_n^2) / (2 (1 + |gamma(t)|)))
// for gamma(t) = c phi^{t-1}. Each summand is increasing in |gamma| and |gamma| decays
// geometrically, so the sum stops once a term drops below 1e-18 of the running total.
double cross_row_sum(double c, double phi, std::span<const double> args, std::int64_t n) {
  if (c == 0.0) return 0.0;
  const double wn = omega(norming_constants(n), args);
  double best = 0.0;
  for (std::int64_t m = 2; m < n; ++m) {
    const double wm = omega(norming_constants(m), args);
    const double half = 0.5 * (wm * wm + wn * wn);
    double sum = 0.0;
    double g = c;
    for (std::int64_t t = 1; t <= n; ++t) {
      const double term = g * std::exp(-half / (1.0 + g));
      sum += term;
      if (term <= 1e-18 * sum || g == 0.0) break;
      g *= std::abs(phi);
    }
    best = std::max(best, static_cast<double>(m) * sum);
  }
  return best;
}

double lnln_weight(std::int64_t n, double epsilon) {
  return std::pow(std::log(std::log(static_cast<double>(n))), 1.0 + epsilon);
}

}  // namespace

AsltBoundRate aslt_bound_rate(const ArrayModel& model, const Coupling& coupling, double epsilon, double x,
                              double y, std::span<const std::int64_t> n_grid) {
  if (!(epsilon > 0.0)) throw DomainError("aslt_bound_rate: epsilon must be positive");
  if (n_grid.empty()) throw DomainError("aslt_bound_rate: empty n grid");
  for (std::int64_t n : n_grid)
    if (n < 16) throw DomainError("aslt_bound_rate: grid entries must be >= 16");
  const WeakAR1* weak = std::get_if<WeakAR1>(&model);
  if (coupling.kind == Coupling::Kind::SharedInnovations && weak == nullptr)
    throw DomainError("aslt_bound_rate: shared innovations are defined for the WeakAR1 model only");

  AsltBoundRate out;
  out.epsilon = epsilon;
  out.within_row = comparison_bound_series(model, BoundKind::L1, x, y, n_grid);
  out.within_row.kind = BoundKind::Eq13;

  const double args[2] = {x, y};
  out.cross_row.kind = BoundKind::Eq14;
  out.cross_row.omega_rule = omega_rule(args);
  out.cross_row.n_grid.assign(n_grid.begin(), n_grid.end());
  for (std::int64_t n : n_grid) {
    const double c = coupling.kind == Coupling::Kind::SharedInnovations ? coupling.c : 0.0;
    out.cross_row.values.push_back(cross_row_sum(c, weak ? weak->phi : 0.0, args, n));
  }

  double max_all = 0.0, max_first_half = 0.0;
  const std::size_t half = (n_grid.size() + 1) / 2;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const double w = lnln_weight(n_grid[i], epsilon);
    out.within_ratio.push_back(out.within_row.values[i] * w);
    out.cross_ratio.push_back(out.cross_row.values[i] * w);
    const double r = std::max(out.within_ratio.back(), out.cross_ratio.back());
    max_all = std::max(max_all, r);
    if (i < half) max_first_half = std::max(max_first_half, r);
  }
  out.bounded = max_all <= max_first_half;
  return out;
}

bool eventually_decreasing(std::span<const double> values) {
  if (values.size() < 2) return false;
  const std::size_t from = values.size() >= 3 ? values.size() - 2 : 1;
  for (std::size_t i = from; i < values.size(); ++i)
    if (!(values[i] < values[i - 1])) return false;
  return true;
}

}  // namespace hrext

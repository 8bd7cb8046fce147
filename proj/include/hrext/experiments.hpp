#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hrext/evd_core.hpp"
#include "hrext/gauss_arrays.hpp"

namespace hrext {

/// Evenly spaced grid lo..hi with `count` nodes (count == 1 gives {lo}).
struct GridSpec {
  double lo = -2.0;
  double hi = 4.0;
  int count = 9;

  Eigen::VectorXd nodes() const;
};

/// Monte Carlo CDF of the normalized componentwise maxima ((M1 - b_n)/a_n, (M2 - b_n)/a_n).
struct EmpiricalLaw2D {
  Eigen::VectorXd grid_x;
  Eigen::VectorXd grid_y;
  Eigen::MatrixXd cdf;  // cdf(i, j) = P(M1 <= u_n(grid_x[i]), M2 <= u_n(grid_y[j]))
  std::int64_t replications = 0;
  std::int64_t n = 0;
  std::uint64_t master_seed = 0;
};

using Theory2D = std::function<double(double, double)>;

/// Replication r uses row seed child_seed(seed, r); counts are merged exactly, so the result
/// does not depend on `workers`.
EmpiricalLaw2D empirical_max_law(const ArrayModel& model, std::int64_t n, std::int64_t replications,
                                 const Eigen::VectorXd& grid_x, const Eigen::VectorXd& grid_y,
                                 std::uint64_t seed, int workers = 1);

Eigen::MatrixXd evaluate_on_grid(const Eigen::VectorXd& grid_x, const Eigen::VectorXd& grid_y,
                                 const Theory2D& theory);

/// Largest absolute difference between the empirical CDF and `theory` over the grid nodes.
double sup_distance(const EmpiricalLaw2D& emp, const Theory2D& theory);

/// Half-width of a simultaneous Monte Carlo band for `nodes` CDF values from R replications
/// (DKW with a Bonferroni split): sqrt(ln(2 nodes) / (2 R)).
double grid_mc_band(std::int64_t replications, std::int64_t nodes);

/// E H_{lambda~}(x + tau11 - sqrt(2 tau11) Z, y + tau22 - sqrt(2 tau22) W) by tensor
/// Gauss–Hermite quadrature with `nodes` points per axis, (Z, W) whitened as
/// (Z, rho Z + sqrt(1 - rho^2) W').
double mixture_limit_cdf(const MixtureParams& mp, double x, double y, int nodes);

/// Same, doubling the node count from 32 until successive values differ by < 1e-10.
double mixture_limit_cdf(const MixtureParams& mp, double x, double y);

/// E Λ(x + tau11 - sqrt(2 tau11) Z), the x-marginal of the mixture limit.
double univariate_mixture_cdf(double tau11, double x, int nodes);

/// Axis values of the four-sided max/min event
///   -u_n(y1) < m1 <= M1 <= u_n(x1),  -u_n(y2) < m2 <= M2 <= u_n(x2).
/// +inf is allowed on every axis and makes that side vacuous.
struct Grid4 {
  std::vector<double> x1, x2, y1, y2;
};

struct EmpiricalMaxMin {
  Grid4 grid;
  std::vector<double> prob;  // row-major over (x1, x2, y1, y2)
  std::int64_t replications = 0;
  std::int64_t n = 0;
  std::uint64_t master_seed = 0;

  std::size_t index(std::size_t i1, std::size_t i2, std::size_t j1, std::size_t j2) const {
    return ((i1 * grid.x2.size() + i2) * grid.y1.size() + j1) * grid.y2.size() + j2;
  }
  double at(std::size_t i1, std::size_t i2, std::size_t j1, std::size_t j2) const {
    return prob[index(i1, i2, j1, j2)];
  }
};

EmpiricalMaxMin empirical_maxmin_law(const ArrayModel& model, std::int64_t n, std::int64_t replications,
                                     const Grid4& grid, std::uint64_t seed, int workers = 1);

/// Cross-row dependence of the rows used in a logarithmic-average path.
struct Coupling {
  enum class Kind { IndependentRows, SharedInnovations } kind = Kind::IndependentRows;
  double c = 0.0;

  static Coupling independent() { return {}; }
  static Coupling shared(double c);
  std::string str() const;
};

struct AsltMaxMinPoint {
  double x1, x2, y1, y2;
};

struct AsltResult {
  std::int64_t first_row = 2;            // rows k < first_row are outside the model's domain
  std::vector<std::int64_t> checkpoints;  // n_max/8, n_max/4, n_max/2, n_max
  // average[p][c]: (1/ln n) sum_{k <= n} (1/k) 1{event_k} at checkpoint c for point p
  std::vector<std::vector<double>> max_average;
  std::vector<std::vector<double>> maxmin_average;
  std::vector<double> ceiling;  // (sum_{k <= n} 1/k) / ln n at each checkpoint
  bool ceiling_held = true;     // checked at every k, not only at checkpoints
};

inline constexpr std::int64_t kAsltMaxRows = 100000;

/// One path of the logarithmic averages. Row k has size k and seed child_seed(seed, k);
/// shared innovations come from child stream 0. n_max > kAsltMaxRows needs allow_large.
AsltResult aslt_average(const ArrayModel& model, const Coupling& coupling, std::int64_t n_max,
                        std::span<const GumbelPoint> points, std::span<const AsltMaxMinPoint> maxmin_points,
                        std::uint64_t seed, bool allow_large = false);

enum class BoundKind { L1, L2, Eq13, Eq14 };

std::string to_string(BoundKind kind);

struct BoundSeries {
  BoundKind kind = BoundKind::L1;
  std::vector<std::int64_t> n_grid;
  std::vector<double> values;
  std::string omega_rule;
};

/// Exact comparison-lemma sums, the maximum over pairs (i, j) of
///   L1: n sum_{k=1}^{n-1} |rho_ij(k,n)| exp(-w_n^2 / (1 + |rho_ij(k,n)|))
///   L2: n sum_{k=1}^{n-1} |rho_ij(k,n) - tau_ij(n)| exp(-w_n^2 / (1 + max(|rho_ij(k,n)|, tau_ij(n))))
/// with w_n = min |u_n(a)| over the arguments `args` (two for (x, y), four for the max/min
/// event). L2 needs a model with tau constants.
BoundSeries comparison_bound_series(const ArrayModel& model, BoundKind kind, std::span<const double> args,
                                    std::span<const std::int64_t> n_grid);

BoundSeries comparison_bound_series(const ArrayModel& model, BoundKind kind, double x, double y,
                                    std::span<const std::int64_t> n_grid);

struct AsltBoundRate {
  double epsilon = 0.0;
  BoundSeries within_row;   // the L1-type sum
  BoundSeries cross_row;    // max_m m sum_k |gamma(k,m,n)| exp(-(w_m^2 + w_n^2) / (2 (1 + |gamma|)))
  std::vector<double> within_ratio;  // sum * (ln ln n)^{1 + eps}
  std::vector<double> cross_ratio;
  bool bounded = false;  // no ratio exceeds the max over the first half of the grid
};

/// Cross-row correlations for SharedInnovations are gamma(t) = c phi^{t-1} (WeakAR1 only);
/// IndependentRows gives gamma = 0. Grid entries must be >= 16.
AsltBoundRate aslt_bound_rate(const ArrayModel& model, const Coupling& coupling, double epsilon, double x,
                              double y, std::span<const std::int64_t> n_grid);

/// True when the last three values are strictly decreasing.
bool eventually_decreasing(std::span<const double> values);

}  // namespace hrext

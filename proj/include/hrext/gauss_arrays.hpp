#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hrext/evd_core.hpp"

namespace hrext {

/// Coupled-innovation AR(1) row: X_k = phi X_{k-1} + sqrt(1 - phi^2) eps_k with innovation
/// pairs of correlation rho_0(n) = 1 - lambda^2 / ln n (0 when lambda = inf).
/// Induced correlations: rho_ii(k) = phi^k, rho_12(k) = rho_0(n) phi^k.
struct WeakAR1 {
  HrParam lambda{1.0};
  double phi = 0.0;
};

/// Shared-factor row Y_k = sqrt(tau_ii(n)) Z_0 + sqrt(1 - tau_ii(n)) Z_k with tau_ij(n) = tau_ij / ln n.
/// Lagged correlations are exactly tau_ij(n) for every k >= 1.
struct StrongFactor {
  MixtureParams mix;
};

struct TauConstants {
  double t11 = 0.0, t22 = 0.0, t12 = 0.0;
  double operator()(int i, int j) const noexcept { return i != j ? t12 : (i == 1 ? t11 : t22); }
};

/// Correlations given as functions; sampled through a Cholesky factor of the 2n x 2n matrix.
struct Explicit {
  std::function<double(std::int64_t n)> rho0;
  // rho_ij(k, n) for lag k >= 1; rho_12 and rho_21 are the same function value.
  std::function<double(int i, int j, std::int64_t k, std::int64_t n)> rho;
  // Constants tau_ij of the logarithmic-decay regime, when the model has them.
  std::optional<TauConstants> tau;
  std::string label = "explicit";
};

using ArrayModel = std::variant<WeakAR1, StrongFactor, Explicit>;

/// Largest row size accepted for Explicit models.
inline constexpr std::int64_t kExplicitMaxRow = 4000;

WeakAR1 make_weak_ar1(HrParam lambda, double phi);

/// Explicit copy of another model's induced correlations.
Explicit explicit_from(const ArrayModel& model);

/// Explicit model with rho_ij(k, n) = tau_ij / ln(max(k, 2)) and rho_0(n) = 1 - lambda^2 / ln n.
Explicit explicit_log_decay(const MixtureParams& mix);

/// tau / ln(k). Shared by every code path that compares correlations with tau_ij / ln k.
double tau_over_log(double tau, std::int64_t k);

std::string model_name(const ArrayModel& model);

/// rho_0(n) of the model.
double model_rho0(const ArrayModel& model, std::int64_t n);

/// tau_ij of the model, if it has them (StrongFactor, or Explicit with tau set).
std::optional<TauConstants> model_tau(const ArrayModel& model);

/// Exact model correlation corr(X_k^{(i)}, X_{k+lag}^{(j)}) in a row of size n.
double induced_correlation(const ArrayModel& model, int i, int j, std::int64_t lag, std::int64_t n);

/// max_{from <= k < n} |rho_ij(k, n)|, closed form for WeakAR1 / StrongFactor, scanned otherwise.
double max_abs_correlation(const ArrayModel& model, int i, int j, std::int64_t from, std::int64_t n);

struct RowSample {
  std::int64_t n = 0;
  Eigen::VectorXd x1;
  Eigen::VectorXd x2;
  std::uint64_t seed = 0;
};

/// Sampler for rows of size n of one model. Construction validates the model at n and, for
/// Explicit models, factorizes the correlation matrix once; sample() is then const and
/// thread-safe.
class RowSampler {
 public:
  RowSampler(const ArrayModel& model, std::int64_t n);

  std::int64_t n() const noexcept { return n_; }
  double rho0() const noexcept { return rho0_; }

  RowSample sample(std::uint64_t seed) const;
  void sample_into(std::uint64_t seed, RowSample& row) const;

 private:
  void sample_weak(std::uint64_t seed, RowSample& row) const;
  void sample_strong(std::uint64_t seed, RowSample& row) const;
  void sample_explicit(std::uint64_t seed, RowSample& row) const;

  enum class Kind { Weak, Strong, Explicit } kind_;
  std::int64_t n_;
  double rho0_ = 0.0;
  // WeakAR1
  double phi_ = 0.0;
  // StrongFactor: factor loadings sqrt(tau_ii(n)), residual corr rho~_0(n), factor corr
  double load1_ = 0.0, load2_ = 0.0, factor_corr_ = 0.0, resid_corr_ = 0.0;
  // Explicit: lower Cholesky factor of the 2n x 2n correlation matrix
  Eigen::MatrixXd chol_;
};

/// One row of the array; deterministic in seed.
RowSample sample_row(const ArrayModel& model, std::int64_t n, std::uint64_t seed);

/// WeakAR1 row whose innovations share a persistent sequence across rows:
///   eps_l^{(i)} = sqrt(c) eta_l + sqrt(1 - c) xi_l^{(i)},
/// with eta the same for both components and for every row, xi row-specific with correlation
/// (rho_0(n) - c) / (1 - c). Cross-row correlations are then c phi^{|k-l|}.
/// `shared` must hold at least n values; c in [0, 1).
RowSample sample_row_shared(const WeakAR1& model, std::int64_t n, std::span<const double> shared,
                            double c, std::uint64_t seed);

struct Extremes {
  double max1 = 0.0, max2 = 0.0, min1 = 0.0, min2 = 0.0;
};

Extremes row_extremes(const RowSample& row);

enum class Assumption { A1, A2 };

struct AssumptionReport {
  Assumption assumption = Assumption::A1;
  std::vector<std::int64_t> n_grid;
  double sigma = 0.0;  // sigma (A1) or max_ij delta_ij (A2) at the largest grid n
  double alpha = 0.0;  // alpha (A1) or varpi (A2)
  std::vector<std::int64_t> cutoff;
  std::vector<double> statistic;
  bool decaying = false;
};

/// Evaluates the statistic of Assumption A1,
///   max_{I_n <= k < n, ij} |rho_ij(k, n)| ln n,  I_n = [n^alpha],
/// or of Assumption A2,
///   max_{K_n <= k < n, ij} |rho_ij(k, n) ln k - tau_ij|,  K_n = [n^alpha] (k >= 2),
/// on each grid point. alpha must lie in (0, (1 - sigma) / (1 + sigma)).
AssumptionReport validate_assumption(const ArrayModel& model, Assumption which,
                                     std::span<const std::int64_t> n_grid, double alpha);

}  // namespace hrext

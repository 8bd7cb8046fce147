#include "hrext/gauss_arrays.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hrext/norming.hpp"
#include "hrext/rng.hpp"

namespace hrext {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double log_n(std::int64_t n) { return std::log(static_cast<double>(n)); }

void require_pair(int i, int j) {
  if ((i != 1 && i != 2) || (j != 1 && j != 2)) throw DomainError("component index must be 1 or 2");
}

// rho_0(n) for the closed-form models; lambda = inf means independent components.
double closed_form_rho0(const HrParam& lambda, std::int64_t n) {
  if (n < 2) throw DomainError("row size n must be >= 2");
  if (lambda.is_infinite()) return 0.0;
  return rho0_from_lambda(lambda, n);
}

double strong_lagged(const MixtureParams& mix, int i, int j, std::int64_t n) {
  return mix.tau(i, j) / log_n(n);
}

constexpr int kPairs[3][2] = {{1, 1}, {1, 2}, {2, 2}};

}  // namespace

WeakAR1 make_weak_ar1(HrParam lambda, double phi) {
  if (!(phi > -1.0 && phi < 1.0)) throw DomainError("phi must lie in (-1, 1)");
  return WeakAR1{lambda, phi};
}

double tau_over_log(double tau, std::int64_t k) { return tau / log_n(k); }

Explicit explicit_from(const ArrayModel& model) {
  Explicit e;
  e.rho0 = [model](std::int64_t n) { return model_rho0(model, n); };
  e.rho = [model](int i, int j, std::int64_t k, std::int64_t n) {
    return induced_correlation(model, i, j, k, n);
  };
  e.tau = model_tau(model);
  e.label = "explicit(" + model_name(model) + ")";
  return e;
}

Explicit explicit_log_decay(const MixtureParams& mix) {
  Explicit e;
  const HrParam lambda = mix.lambda();
  e.rho0 = [lambda](std::int64_t n) { return closed_form_rho0(lambda, n); };
  e.tau = TauConstants{mix.tau11(), mix.tau22(), mix.tau12()};
  const TauConstants tau = *e.tau;
  e.rho = [tau](int i, int j, std::int64_t k, std::int64_t) {
    return tau_over_log(tau(i, j), std::max<std::int64_t>(k, 2));
  };
  e.label = "explicit-log-decay";
  return e;
}

std::string model_name(const ArrayModel& model) {
  return std::visit(Overloaded{[](const WeakAR1&) { return std::string("weak-ar1"); },
                               [](const StrongFactor&) { return std::string("strong-factor"); },
                               [](const Explicit& e) { return e.label; }},
                    model);
}

double model_rho0(const ArrayModel& model, std::int64_t n) {
  return std::visit(Overloaded{[n](const WeakAR1& m) { return closed_form_rho0(m.lambda, n); },
                               [n](const StrongFactor& m) { return closed_form_rho0(m.mix.lambda(), n); },
                               [n](const Explicit& m) {
                                 if (n < 2) throw DomainError("row size n must be >= 2");
                                 return m.rho0(n);
                               }},
                    model);
}

std::optional<TauConstants> model_tau(const ArrayModel& model) {
  return std::visit(
      Overloaded{[](const WeakAR1&) -> std::optional<TauConstants> { return std::nullopt; },
                 [](const StrongFactor& m) -> std::optional<TauConstants> {
                   return TauConstants{m.mix.tau11(), m.mix.tau22(), m.mix.tau12()};
                 },
                 [](const Explicit& m) { return m.tau; }},
      model);
}

double induced_correlation(const ArrayModel& model, int i, int j, std::int64_t lag, std::int64_t n) {
  require_pair(i, j);
  if (lag < 0 || lag >= n) throw DomainError("lag must satisfy 0 <= k < n");
  if (lag == 0) return i == j ? 1.0 : model_rho0(model, n);
  return std::visit(
      Overloaded{[&](const WeakAR1& m) {
                   const double decay = std::pow(m.phi, static_cast<double>(lag));
                   return i == j ? decay : closed_form_rho0(m.lambda, n) * decay;
                 },
                 [&](const StrongFactor& m) { return strong_lagged(m.mix, i, j, n); },
                 [&](const Explicit& m) { return m.rho(i, j, lag, n); }},
      model);
}

double max_abs_correlation(const ArrayModel& model, int i, int j, std::int64_t from, std::int64_t n) {
  require_pair(i, j);
  from = std::max<std::int64_t>(from, 1);
  if (from >= n) return 0.0;
  if (const auto* m = std::get_if<WeakAR1>(&model)) {
    // |phi|^k is nonincreasing in k
    const double decay = std::pow(std::abs(m->phi), static_cast<double>(from));
    return i == j ? decay : std::abs(closed_form_rho0(m->lambda, n)) * decay;
  }
  if (const auto* m = std::get_if<StrongFactor>(&model)) return std::abs(strong_lagged(m->mix, i, j, n));
  double best = 0.0;
  for (std::int64_t k = from; k < n; ++k) best = std::max(best, std::abs(induced_correlation(model, i, j, k, n)));
  return best;
}

// ---------------------------------------------------------------------------------------------

RowSampler::RowSampler(const ArrayModel& model, std::int64_t n) : n_(n) {
  if (n < 2) throw DomainError("row size n must be >= 2");
  std::visit(
      Overloaded{
          [&](const WeakAR1& m) {
            if (!(m.phi > -1.0 && m.phi < 1.0)) throw DomainError("phi must lie in (-1, 1)");
            kind_ = Kind::Weak;
            phi_ = m.phi;
            rho0_ = closed_form_rho0(m.lambda, n);
          },
          [&](const StrongFactor& m) {
            kind_ = Kind::Strong;
            const double ln = log_n(n);
            if (!(ln > std::max(m.mix.tau11(), m.mix.tau22())))
              throw DomainError("strong factor model needs ln n > max(tau_11, tau_22)");
            const double t11 = m.mix.tau11() / ln;
            const double t22 = m.mix.tau22() / ln;
            const double t12 = m.mix.tau12() / ln;
            rho0_ = closed_form_rho0(m.mix.lambda(), n);
            load1_ = std::sqrt(t11);
            load2_ = std::sqrt(t22);
            factor_corr_ = std::min(1.0, m.mix.zw_correlation());
            resid_corr_ = (rho0_ - t12) / std::sqrt((1.0 - t11) * (1.0 - t22));
            if (std::abs(resid_corr_) > 1.0 + 1e-12)
              throw DomainError("strong factor model: residual correlation outside [-1, 1] at n = " +
                                std::to_string(n));
            resid_corr_ = std::clamp(resid_corr_, -1.0, 1.0);
          },
          [&](const Explicit& m) {
            kind_ = Kind::Explicit;
            if (n > kExplicitMaxRow)
              throw DomainError("explicit model row size exceeds " + std::to_string(kExplicitMaxRow));
            rho0_ = m.rho0(n);
            const Eigen::Index dim = 2 * n;
            Eigen::MatrixXd corr(dim, dim);
            for (Eigen::Index a = 0; a < dim; ++a) {
              for (Eigen::Index b = 0; b <= a; ++b) {
                const int ci = a < n ? 1 : 2;
                const int cj = b < n ? 1 : 2;
                const std::int64_t lag = std::abs((a % n) - (b % n));
                double r;
                if (lag == 0)
                  r = ci == cj ? 1.0 : rho0_;
                else
                  r = m.rho(std::min(ci, cj), std::max(ci, cj), lag, n);
                corr(a, b) = r;
                corr(b, a) = r;
              }
            }
            Eigen::LLT<Eigen::MatrixXd> llt(corr);
            if (llt.info() != Eigen::Success) {
              // leading minors are nested: bisect for the first one that fails
              Eigen::Index lo = 1, hi = dim;
              while (lo < hi) {
                const Eigen::Index mid = lo + (hi - lo) / 2;
                Eigen::LLT<Eigen::MatrixXd> part(corr.topLeftCorner(mid, mid));
                if (part.info() == Eigen::Success)
                  lo = mid + 1;
                else
                  hi = mid;
              }
              throw ModelError("explicit correlation matrix is not positive definite at n = " +
                                   std::to_string(n),
                               lo);
            }
            chol_ = llt.matrixL();
          }},
      model);
}

RowSample RowSampler::sample(std::uint64_t seed) const {
  RowSample row;
  sample_into(seed, row);
  return row;
}

void RowSampler::sample_into(std::uint64_t seed, RowSample& row) const {
  row.n = n_;
  row.seed = seed;
  row.x1.resize(n_);
  row.x2.resize(n_);
  switch (kind_) {
    case Kind::Weak:
      sample_weak(seed, row);
      break;
    case Kind::Strong:
      sample_strong(seed, row);
      break;
    case Kind::Explicit:
      sample_explicit(seed, row);
      break;
  }
}

void RowSampler::sample_weak(std::uint64_t seed, RowSample& row) const {
  Engine eng = make_engine(seed);
  std::normal_distribution<double> gauss;
  const double resid = std::sqrt(std::max(0.0, 1.0 - rho0_ * rho0_));
  const double innov = std::sqrt(1.0 - phi_ * phi_);
  double prev1 = 0.0, prev2 = 0.0;
  for (std::int64_t k = 0; k < n_; ++k) {
    const double z1 = gauss(eng);
    const double z2 = gauss(eng);
    const double e1 = z1;
    const double e2 = rho0_ * z1 + resid * z2;
    // the first innovation is the stationary initial value
    if (k == 0) {
      prev1 = e1;
      prev2 = e2;
    } else {
      prev1 = phi_ * prev1 + innov * e1;
      prev2 = phi_ * prev2 + innov * e2;
    }
    row.x1[k] = prev1;
    row.x2[k] = prev2;
  }
}

void RowSampler::sample_strong(std::uint64_t seed, RowSample& row) const {
  Engine eng = make_engine(seed);
  std::normal_distribution<double> gauss;
  const double g1 = gauss(eng);
  const double g2 = gauss(eng);
  const double f1 = g1;
  const double f2 = factor_corr_ * g1 + std::sqrt(std::max(0.0, 1.0 - factor_corr_ * factor_corr_)) * g2;
  const double rest1 = std::sqrt(1.0 - load1_ * load1_);
  const double rest2 = std::sqrt(1.0 - load2_ * load2_);
  const double resid = std::sqrt(std::max(0.0, 1.0 - resid_corr_ * resid_corr_));
  for (std::int64_t k = 0; k < n_; ++k) {
    const double z1 = gauss(eng);
    const double z2 = resid_corr_ * z1 + resid * gauss(eng);
    row.x1[k] = load1_ * f1 + rest1 * z1;
    row.x2[k] = load2_ * f2 + rest2 * z2;
  }
}

void RowSampler::sample_explicit(std::uint64_t seed, RowSample& row) const {
  Engine eng = make_engine(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd z(2 * n_);
  for (Eigen::Index a = 0; a < z.size(); ++a) z[a] = gauss(eng);
  const Eigen::VectorXd x = chol_.triangularView<Eigen::Lower>() * z;
  row.x1 = x.head(n_);
  row.x2 = x.tail(n_);
}

RowSample sample_row(const ArrayModel& model, std::int64_t n, std::uint64_t seed) {
  return RowSampler(model, n).sample(seed);
}

RowSample sample_row_shared(const WeakAR1& model, std::int64_t n, std::span<const double> shared,
                            double c, std::uint64_t seed) {
  if (!(c >= 0.0 && c < 1.0)) throw DomainError("shared-innovation weight c must lie in [0, 1)");
  if (!(model.phi > -1.0 && model.phi < 1.0)) throw DomainError("phi must lie in (-1, 1)");
  if (static_cast<std::int64_t>(shared.size()) < n) throw DomainError("shared innovation sequence too short");
  const double rho0 = closed_form_rho0(model.lambda, n);
  const double r = (rho0 - c) / (1.0 - c);
  if (r < -1.0 - 1e-12)
    throw DomainError("shared coupling: c too large for rho_0(n) (needs rho_0(n) >= 2c - 1)");
  const double rc = std::clamp(r, -1.0, 1.0);
  const double sc = std::sqrt(c);
  const double own = std::sqrt(1.0 - c);
  const double resid = std::sqrt(std::max(0.0, 1.0 - rc * rc));
  const double innov = std::sqrt(1.0 - model.phi * model.phi);

  RowSample row;
  row.n = n;
  row.seed = seed;
  row.x1.resize(n);
  row.x2.resize(n);
  Engine eng = make_engine(seed);
  std::normal_distribution<double> gauss;
  double prev1 = 0.0, prev2 = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    const double xi1 = gauss(eng);
    const double xi2 = rc * xi1 + resid * gauss(eng);
    const double e1 = sc * shared[k] + own * xi1;
    const double e2 = sc * shared[k] + own * xi2;
    if (k == 0) {
      prev1 = e1;
      prev2 = e2;
    } else {
      prev1 = model.phi * prev1 + innov * e1;
      prev2 = model.phi * prev2 + innov * e2;
    }
    row.x1[k] = prev1;
    row.x2[k] = prev2;
  }
  return row;
}

Extremes row_extremes(const RowSample& row) {
  if (row.x1.size() == 0 || row.x2.size() == 0) throw DomainError("row_extremes: empty row");
  return Extremes{row.x1.maxCoeff(), row.x2.maxCoeff(), row.x1.minCoeff(), row.x2.minCoeff()};
}

// ---------------------------------------------------------------------------------------------

namespace {

std::int64_t power_cutoff(std::int64_t n, double alpha) {
  return static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), alpha)));
}

double a2_pair_statistic(const ArrayModel& model, double tau, int i, int j, std::int64_t from,
                         std::int64_t n) {
  from = std::max<std::int64_t>(from, 2);
  if (from >= n) return 0.0;
  if (const auto* m = std::get_if<StrongFactor>(&model)) {
    // |tau ln k / ln n - tau| is largest at the smallest k
    const double rho = strong_lagged(m->mix, i, j, n);
    return std::abs(rho - tau_over_log(tau, from)) * log_n(from);
  }
  double best = 0.0;
  for (std::int64_t k = from; k < n; ++k) {
    const double rho = induced_correlation(model, i, j, k, n);
    best = std::max(best, std::abs(rho - tau_over_log(tau, k)) * log_n(k));
  }
  return best;
}

bool strictly_decreasing_tail(const std::vector<double>& s) {
  if (s.size() < 3) return false;
  for (std::size_t t = s.size() - 2; t < s.size(); ++t) {
    // differences at the level of rounding do not count as a decrease
    const double slack = 1e-12 * std::abs(s[t - 1]);
    if (!(s[t] < s[t - 1] - slack)) return false;
  }
  return true;
}

}  // namespace

AssumptionReport validate_assumption(const ArrayModel& model, Assumption which,
                                     std::span<const std::int64_t> n_grid, double alpha) {
  if (n_grid.empty()) throw DomainError("validate_assumption: empty n grid");
  for (std::int64_t n : n_grid)
    if (n < 3) throw DomainError("validate_assumption: grid entries must be >= 3");

  std::optional<TauConstants> tau;
  if (which == Assumption::A2) {
    tau = model_tau(model);
    if (!tau) throw DomainError("validate_assumption: A2 needs a model with tau constants");
  }

  AssumptionReport rep;
  rep.assumption = which;
  rep.n_grid.assign(n_grid.begin(), n_grid.end());
  rep.alpha = alpha;
  const std::int64_t n_max = *std::max_element(n_grid.begin(), n_grid.end());
  for (const auto& p : kPairs) rep.sigma = std::max(rep.sigma, max_abs_correlation(model, p[0], p[1], 1, n_max));
  if (!(rep.sigma < 1.0)) throw DomainError("validate_assumption: lagged correlations reach 1");
  const double upper = (1.0 - rep.sigma) / (1.0 + rep.sigma);
  if (!(alpha > 0.0 && alpha < upper))
    throw DomainError("validate_assumption: alpha must lie in (0, " + std::to_string(upper) + ")");

  for (std::int64_t n : n_grid) {
    const std::int64_t cut = power_cutoff(n, alpha);
    double stat = 0.0;
    for (const auto& p : kPairs) {
      if (which == Assumption::A1)
        stat = std::max(stat, max_abs_correlation(model, p[0], p[1], cut, n) * log_n(n));
      else
        stat = std::max(stat, a2_pair_statistic(model, (*tau)(p[0], p[1]), p[0], p[1], cut, n));
    }
    rep.cutoff.push_back(cut);
    rep.statistic.push_back(stat);
  }
  rep.decaying = strictly_decreasing_tail(rep.statistic);
  return rep;
}

}  // namespace hrext

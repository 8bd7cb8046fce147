#include "hrext/evd_core.hpp"

#include <boost/math/tools/roots.hpp>

#include <stdexcept>

#include "hrext/rng.hpp"

namespace hrext {

MixtureParams::MixtureParams(double tau11, double tau22, double tau12, HrParam lambda)
    : tau11_(tau11), tau22_(tau22), tau12_(tau12), lambda_(lambda) {
  if (!(tau11 > 0.0) || !(tau22 > 0.0) || !(tau12 > 0.0) || !std::isfinite(tau11) ||
      !std::isfinite(tau22) || !std::isfinite(tau12))
    throw DomainError("tau_11, tau_22, tau_12 must be positive and finite");
  if (tau12 > std::sqrt(tau11 * tau22) * (1.0 + 1e-15))
    throw DomainError("tau_12 must not exceed sqrt(tau_11 tau_22)");
  if (!lambda.is_infinite() && lambda.lambda() * lambda.lambda() < -tau_tilde())
    throw DomainError("lambda^2 + tau_12 - (tau_11 + tau_22)/2 must be >= 0");
}

double MixtureParams::tau(int i, int j) const noexcept {
  if (i != j) return tau12_;
  return i == 1 ? tau11_ : tau22_;
}

HrParam MixtureParams::lambda_tilde() const {
  if (lambda_.is_infinite()) return HrParam::infinity();
  const double sq = lambda_.lambda() * lambda_.lambda() + tau_tilde();
  return HrParam(std::sqrt(std::max(sq, 0.0)));
}

namespace {

double conditional_quantile(const HrParam& p, double x, double u) {
  auto f = [&](double y) { return hr_conditional_cdf(p, y, x) - u; };
  double lo = x - 8.0;
  double hi = x + 8.0;
  int expansions = 0;
  while (f(lo) > 0.0) {
    lo -= 2.0 * (hi - lo);
    if (++expansions > 64) throw std::logic_error("hr_sample: failed to bracket conditional quantile");
  }
  while (f(hi) < 0.0) {
    hi += 2.0 * (hi - lo);
    if (++expansions > 64) throw std::logic_error("hr_sample: failed to bracket conditional quantile");
  }
  std::uintmax_t max_iter = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-10; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, max_iter);
  if (!tol(a, b)) throw std::logic_error("hr_sample: root finding did not converge");
  return 0.5 * (a + b);
}

}  // namespace

Eigen::Matrix<double, Eigen::Dynamic, 2> hr_sample(const HrParam& p, std::int64_t count,
                                                   std::uint64_t seed) {
  if (count < 1) throw DomainError("hr_sample: count must be >= 1");
  Eigen::Matrix<double, Eigen::Dynamic, 2> out(count, 2);
  Engine eng = make_engine(seed);
  for (std::int64_t i = 0; i < count; ++i) {
    const double x = gumbel_quantile(uniform_open01(eng));
    const double u = uniform_open01(eng);
    double y = 0.0;
    switch (p.branch()) {
      case HrParam::Branch::Comonotone:
        y = x;
        break;
      case HrParam::Branch::Independent:
        y = gumbel_quantile(u);
        break;
      case HrParam::Branch::Finite:
        y = conditional_quantile(p, x, u);
        break;
    }
    out(i, 0) = x;
    out(i, 1) = y;
  }
  return out;
}

}  // namespace hrext

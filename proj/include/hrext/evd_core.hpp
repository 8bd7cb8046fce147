#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>

#include "hrext/errors.hpp"

namespace hrext {

/// Hüsler–Reiss dependence parameter lambda in [0, +inf].
///
/// lambda = 0 is complete dependence (H = min of the Gumbel marginals), lambda = +inf is
/// independence. Values within 1e-12 of zero, or at least 1e12, are evaluated with the
/// closed-form edge formulas since the general formula divides by lambda.
class HrParam {
 public:
  enum class Branch { Comonotone, Finite, Independent };

  static constexpr double kZeroThreshold = 1e-12;
  static constexpr double kInfThreshold = 1e12;

  explicit HrParam(double lambda) : lambda_(lambda) {
    if (std::isnan(lambda) || lambda < 0.0)
      throw DomainError("lambda must be >= 0 or +inf");
  }

  static HrParam infinity() { return HrParam(std::numeric_limits<double>::infinity()); }

  double lambda() const noexcept { return lambda_; }
  bool is_infinite() const noexcept { return std::isinf(lambda_); }

  Branch branch() const noexcept {
    if (lambda_ <= kZeroThreshold) return Branch::Comonotone;
    if (lambda_ >= kInfThreshold) return Branch::Independent;
    return Branch::Finite;
  }

 private:
  double lambda_;
};

/// Argument of H_lambda on the Gumbel scale.
struct GumbelPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Constants of the strong-dependence mixture limit: tau_11, tau_22, tau_12 and lambda.
class MixtureParams {
 public:
  MixtureParams(double tau11, double tau22, double tau12, HrParam lambda);

  double tau11() const noexcept { return tau11_; }
  double tau22() const noexcept { return tau22_; }
  double tau12() const noexcept { return tau12_; }
  HrParam lambda() const noexcept { return lambda_; }
  double tau(int i, int j) const noexcept;

  // tau_12 - (tau_11 + tau_22) / 2
  double tau_tilde() const noexcept { return tau12_ - 0.5 * (tau11_ + tau22_); }
  // sqrt(lambda^2 + tau_tilde)
  HrParam lambda_tilde() const;
  // corr(Z, W) = tau_12 / sqrt(tau_11 tau_22)
  double zw_correlation() const noexcept { return tau12_ / std::sqrt(tau11_ * tau22_); }

 private:
  double tau11_, tau22_, tau12_;
  HrParam lambda_;
};

/// Standard normal CDF. Uses erfc on the side that keeps tail accuracy.
template <std::floating_point T>
T std_normal_cdf(T z) {
  if (std::isnan(z)) return z;
  return T(0.5) * std::erfc(-z / std::numbers::sqrt2_v<T>);
}

template <std::floating_point T>
T std_normal_pdf(T z) {
  return std::exp(T(-0.5) * z * z) / std::sqrt(T(2) * std::numbers::pi_v<T>);
}

/// Gumbel CDF exp(-exp(-x)).
template <std::floating_point T>
T gumbel_cdf(T x) {
  return std::exp(-std::exp(-x));
}

/// Gumbel quantile -ln(-ln u); -inf at 0 and +inf at 1.
template <std::floating_point T>
T gumbel_quantile(T u) {
  if (u <= T(0)) return -std::numeric_limits<T>::infinity();
  if (u >= T(1)) return std::numeric_limits<T>::infinity();
  return -std::log(-std::log(u));
}

/// Exponent function V(x, y) = -ln H_lambda(x, y).
///
/// +inf arguments marginalize, -inf arguments give V = +inf.
template <std::floating_point T>
T hr_exponent(const HrParam& p, T x, T y) {
  constexpr T inf = std::numeric_limits<T>::infinity();
  if (x == -inf || y == -inf) return inf;
  if (x == inf) return std::exp(-y);
  if (y == inf) return std::exp(-x);
  const T ex = std::exp(-x);
  const T ey = std::exp(-y);
  switch (p.branch()) {
    case HrParam::Branch::Comonotone:
      return std::max(ex, ey);
    case HrParam::Branch::Independent:
      return ex + ey;
    case HrParam::Branch::Finite:
      break;
  }
  const T lam = static_cast<T>(p.lambda());
  const T half_diff = (x - y) / (T(2) * lam);
  return std_normal_cdf(lam + half_diff) * ey + std_normal_cdf(lam - half_diff) * ex;
}

/// Bivariate Hüsler–Reiss distribution function H_lambda(x, y).
template <std::floating_point T>
T hr_cdf(const HrParam& p, T x, T y) {
  return std::exp(-hr_exponent(p, x, y));
}

inline double hr_cdf(const HrParam& p, const GumbelPoint& pt) { return hr_cdf(p, pt.x, pt.y); }

/// Hüsler–Reiss (Brown–Resnick) copula C(u, v) = H_lambda(Λ^{-1}(u), Λ^{-1}(v)).
template <std::floating_point T>
T hr_copula(const HrParam& p, T u, T v) {
  if (u <= T(0) || v <= T(0)) return T(0);
  if (u >= T(1)) return std::min(v, T(1));
  if (v >= T(1)) return u;
  return hr_cdf(p, gumbel_quantile(u), gumbel_quantile(v));
}

/// Partial derivative dH/dx for finite x, y.
///
/// Differentiating the exponent gives phi(a) e^{-y} / (2 lambda) - phi(b) e^{-x} / (2 lambda)
/// - Phi(b) e^{-x} with a = lambda + (x-y)/(2 lambda), b = lambda - (x-y)/(2 lambda); the
/// first two terms cancel because phi(a) / phi(b) = e^{y-x}.
template <std::floating_point T>
T hr_cdf_dx(const HrParam& p, T x, T y) {
  const T h = hr_cdf(p, x, y);
  switch (p.branch()) {
    case HrParam::Branch::Comonotone:
      return x < y ? h * std::exp(-x) : T(0);
    case HrParam::Branch::Independent:
      return h * std::exp(-x);
    case HrParam::Branch::Finite:
      break;
  }
  const T lam = static_cast<T>(p.lambda());
  const T b = lam + (y - x) / (T(2) * lam);
  return h * std_normal_cdf(b) * std::exp(-x);
}

/// Conditional CDF P(Y <= y | X = x) = dH/dx(x, y) / dH/dx(x, +inf) on the finite branch,
/// evaluated as Phi(b) exp(e^{-x} Phi(-b) - Phi(a) e^{-y}) to avoid cancellation.
template <std::floating_point T>
T hr_conditional_cdf(const HrParam& p, T y, T x) {
  const T lam = static_cast<T>(p.lambda());
  const T half_diff = (x - y) / (T(2) * lam);
  const T a = lam + half_diff;
  const T b = lam - half_diff;
  const T expo = std::exp(-x) * std_normal_cdf(-b) - std_normal_cdf(a) * std::exp(-y);
  return std_normal_cdf(b) * std::exp(expo);
}

/// `count` iid draws from H_lambda, one point per row (x, y).
///
/// X is drawn by Gumbel inversion and Y by inverting the conditional CDF with bracketed
/// root finding (absolute tolerance 1e-10). Throws std::logic_error if bracketing fails.
Eigen::Matrix<double, Eigen::Dynamic, 2> hr_sample(const HrParam& p, std::int64_t count,
                                                   std::uint64_t seed);

}  // namespace hrext

#pragma once

#include <cstdint>

#include "hrext/evd_core.hpp"

namespace hrext {

/// Row size n with the Gaussian-maxima norming constants
///   a_n = 1 / sqrt(2 ln n),  b_n = sqrt(2 ln n) - ln(4 pi ln n) / (2 sqrt(2 ln n)).
struct Norming {
  std::int64_t n = 2;
  double a = 0.0;
  double b = 0.0;

  /// u_n(s) = a_n s + b_n
  double u(double s) const noexcept { return a * s + b; }
  /// Inverse of u: (t - b_n) / a_n, the normalized value of a level t.
  double normalize(double t) const noexcept { return (t - b) / a; }
};

/// Throws DomainError for n < 2.
Norming norming_constants(std::int64_t n);

inline double u_n(const Norming& nm, double s) noexcept { return nm.u(s); }

/// rho_0(n) = 1 - lambda^2 / ln n, the within-pair correlation meeting (1 - rho) ln n = lambda^2.
/// Rejects lambda = +inf and lambda^2 > 2 ln n (correlation below -1).
double rho0_from_lambda(const HrParam& p, std::int64_t n);

/// lambda = sqrt((1 - rho) ln n) for rho in [-1, 1].
HrParam lambda_from_rho0(double rho, std::int64_t n);

}  // namespace hrext

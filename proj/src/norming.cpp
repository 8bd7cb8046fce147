#include "hrext/norming.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hrext {

namespace {

void require_row_size(std::int64_t n) {
  if (n < 2) throw DomainError("row size n must be >= 2, got " + std::to_string(n));
}

}  // namespace

Norming norming_constants(std::int64_t n) {
  require_row_size(n);
  const double log_n = std::log(static_cast<double>(n));
  const double root = std::sqrt(2.0 * log_n);
  Norming nm;
  nm.n = n;
  nm.a = 1.0 / root;
  nm.b = root - std::log(4.0 * std::numbers::pi * log_n) / (2.0 * root);
  return nm;
}

double rho0_from_lambda(const HrParam& p, std::int64_t n) {
  require_row_size(n);
  if (p.is_infinite())
    throw DomainError("rho0_from_lambda: lambda = inf fixes only the limit, supply rho_0(n) directly");
  const double log_n = std::log(static_cast<double>(n));
  const double lam2 = p.lambda() * p.lambda();
  if (lam2 > 2.0 * log_n)
    throw DomainError("rho0_from_lambda: lambda^2 > 2 ln n gives a correlation below -1");
  return 1.0 - lam2 / log_n;
}

HrParam lambda_from_rho0(double rho, std::int64_t n) {
  require_row_size(n);
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("lambda_from_rho0: rho must lie in [-1, 1]");
  return HrParam(std::sqrt((1.0 - rho) * std::log(static_cast<double>(n))));
}

}  // namespace hrext

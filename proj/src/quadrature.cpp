#include "hrext/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>

#include "hrext/errors.hpp"

namespace hrext {

namespace {

GaussHermiteRule build_rule(int points) {
  // He_{k+1}(z) = z He_k(z) - k He_{k-1}(z): zero diagonal, off-diagonal sqrt(k)
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
    jacobi(k - 1, k) = jacobi(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  GaussHermiteRule rule;
  rule.nodes = eig.eigenvalues();
  // total mass of the standard normal weight is 1
  rule.weights = eig.eigenvectors().row(0).array().square().transpose();
  // symmetrize: the rule is exact for odd functions only if nodes pair up
  for (int i = 0; i < points / 2; ++i) {
    const int j = points - 1 - i;
    const double node = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double weight = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -node;
    rule.nodes[j] = node;
    rule.weights[i] = weight;
    rule.weights[j] = weight;
  }
  if (points % 2 == 1) rule.nodes[points / 2] = 0.0;
  rule.weights /= rule.weights.sum();
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int points) {
  if (points < 1 || points > 1024) throw DomainError("gauss_hermite: points must lie in [1, 1024]");
  static std::mutex mu;
  static std::map<int, GaussHermiteRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, build_rule(points)).first;
  return it->second;
}

}  // namespace hrext

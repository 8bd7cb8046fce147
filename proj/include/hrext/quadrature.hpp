#pragma once

#include <Eigen/Core>

namespace hrext {

/// Gauss–Hermite rule for expectations over a standard normal: E f(Z) ~ sum_i w_i f(z_i).
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Golub–Welsch: eigen-decomposition of the Jacobi matrix of the probabilists' Hermite
/// polynomials. Rules are cached per size.
const GaussHermiteRule& gauss_hermite(int points);

}  // namespace hrext

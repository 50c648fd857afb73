#pragma once

#include <Eigen/Dense>

#include "lsfts/errors.hpp"

namespace lsfts {

/// Discretization of the domain [0,1]: ordered sample locations together
/// with quadrature weights. All curves and operator kernels in this library
/// live on a Grid, and every integral is evaluated as a weighted sum over it.
struct Grid {
    Eigen::VectorXd points;  ///< strictly increasing locations in [0,1]
    Eigen::VectorXd weights; ///< positive quadrature weights, same length

    Eigen::Index size() const { return points.size(); }
};

/// Equispaced grid on [0,1] with trapezoid weights (half weight at the two
/// endpoints). Only d=1 is supported.
Grid make_uniform_grid(int n, int d = 1);

/// True when two grids have identical points (used to reject mixing curves
/// that live on different discretizations).
bool same_grid(const Grid& a, const Grid& b);

/// Quadrature approximation of the L2 inner product of f and g.
double inner_product(const Eigen::VectorXd& f, const Eigen::VectorXd& g, const Grid& grid);

/// Quadrature L2 norm, sqrt(inner_product(f, f)).
double l2_norm(const Eigen::VectorXd& f, const Grid& grid);

} // namespace lsfts

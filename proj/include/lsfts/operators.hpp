#pragma once

#include <Eigen/Dense>

#include "lsfts/grid.hpp"

namespace lsfts {

/// A discretized integral operator: the matrix of kernel values
/// kernel(i,j) = c(s_i, s_j) on grid x grid, tagged with the rescaled time
/// and bandwidth it was estimated at. Covariance kernels are symmetric;
/// lagged autocovariance surfaces are not, so symmetry is validated where an
/// operation requires it rather than on construction.
struct LocalCovariance {
    Eigen::MatrixXd kernel; ///< n x n
    Grid grid;
    double u = 0.0;
    double h = 0.0;
};

/// Leading eigenpairs of a symmetric operator. Eigenvalues are descending and
/// each eigenfunction column has quadrature norm 1; columns are pairwise
/// quadrature-orthogonal.
struct EigenSystem {
    Eigen::VectorXd eigenvalues;    ///< length q, descending
    Eigen::MatrixXd eigenfunctions; ///< n x q
    bool clipped = false;           ///< negative eigenvalues were clipped to 0
};

/// Solves the quadrature-weighted eigenproblem for a symmetric kernel: with
/// W = diag(weights), forms M = W^{1/2} K W^{1/2}, takes its symmetric
/// eigendecomposition, and maps eigenvectors back through W^{-1/2} so that
/// the returned eigenfunctions satisfy the integral normalization. Returns
/// the q largest pairs.
EigenSystem operator_eigh(const LocalCovariance& cov, int q);

/// Discretized operator norm of the difference of two symmetric operators on
/// the same grid: the largest absolute eigenvalue of the weighted difference
/// matrix. Used by the test suites for perturbation bounds.
double operator_norm_bound(const LocalCovariance& a, const LocalCovariance& b);

/// Replaces negative eigenvalues by zero, returning true when anything was
/// clipped. Long-run kernel estimates are not guaranteed PSD in finite
/// samples; downstream eigen-based statistics use the clipped spectrum.
bool clip_negative_eigenvalues(EigenSystem& es);

} // namespace lsfts

#pragma once

#include "lsfts/kernels.hpp"
#include "lsfts/operators.hpp"
#include "lsfts/series.hpp"

namespace lsfts {

/// Empirical local covariance operator at rescaled time u:
///
///   uncentered: K(s1,s2) = sum_t w_t X_t(s1) X_t(s2)
///   centered:   subtract the locally weighted mean (same weights) from every
///               curve first.
///
/// The OpenMP kernel parallelizes the accumulation over grid rows; the result
/// is bitwise independent of the thread count.
LocalCovariance local_cov(const FunctionalSeries& series, double u, double h,
                          const SmoothingKernel& kernel, bool center = true,
                          WeightMode mode = WeightMode::paper);

/// Local FPCA: eigenpairs of a local covariance estimate. Eigenvalues in
/// [-1e-10 * scale, 0) are treated as roundoff and clipped to zero (the
/// result is flagged); anything more negative signals a numerics or
/// centering bug and raises NumericError.
EigenSystem local_fpca(const LocalCovariance& cov, int q);

/// Estimated eigenfunctions are only identified up to sign. Returns v_hat
/// multiplied by the sign of <v_hat, v_ref>; a zero inner product is treated
/// as +1 and flagged ambiguous.
struct SignAligned {
    Eigen::VectorXd curve;
    bool ambiguous = false;
};

SignAligned align_sign(const Eigen::VectorXd& v_hat, const Eigen::VectorXd& v_ref,
                       const Grid& grid);

} // namespace lsfts

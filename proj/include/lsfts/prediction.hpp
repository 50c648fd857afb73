#pragma once

#include "lsfts/kernels.hpp"
#include "lsfts/operators.hpp"
#include "lsfts/series.hpp"

namespace lsfts {

/// Covariance estimate used for prediction when only the first T1 of T time
/// points are observed:
///
///   Cbar(s1,s2) = (2/Th) sum_{t=1}^{T1} K1h(u - t/T) X_t(s1) X_t(s2)
///
/// where T1 is the length of `observed` and the factor 2 compensates the
/// half window. The centered variant subtracts the analogous (2/Th)-weighted
/// mean from every curve first. Requires T1 < T.
LocalCovariance prediction_cov(const FunctionalSeries& observed, long T, double u, double h,
                               const SmoothingKernel& kernel, bool center = false);

/// k-step-ahead prediction by truncated local Karhunen-Loeve projection: the
/// last observed curve is projected onto the top-q eigenfunctions of
/// prediction_cov at u,
///
///   Xhat = sum_{j<=q} <X_{T1}, v_j> v_j .
///
/// Each eigenfunction appears twice, so the output is invariant to sign
/// flips. Defaults: u = T1/T (the extra bias term vanishes there), T =
/// T1 + k + 1, and q <= 0 selects the order by the eigenvalue-ratio rule on
/// the estimated spectrum. Requires T1 + k < T.
Eigen::VectorXd predict_k_step(const FunctionalSeries& observed, long T, long k, int q,
                               double u, double h, const SmoothingKernel& kernel,
                               bool center = false);

} // namespace lsfts

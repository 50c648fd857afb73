#pragma once

#include "lsfts/kernels.hpp"
#include "lsfts/operators.hpp"
#include "lsfts/series.hpp"

namespace lsfts {

/// Local lag-`lag` autocovariance surface at rescaled time u:
///
///   g_lag(s1,s2) = (1/Th) sum_{j=lag+1}^{T} K1h(u - j/T)
///                    (X_j(s1) - Xbar(s1)) (X_{j-lag}(s2) - Xbar(s2))
///
/// centered by the full-sample locally weighted mean Xbar at u. Note the
/// surface is not symmetric in (s1, s2). Requires 1 <= lag <= T-1.
LocalCovariance local_autocov(const FunctionalSeries& series, double u, double h,
                              const SmoothingKernel& kernel, long lag);

/// Long-run covariance kernel estimate at rescaled time u:
///
///   chat(s1,s2) = g_0(s1,s2) + sum_{t>=1} K2(t/b) { g_t(s1,s2) + g_t(s2,s1) }
///
/// The lag sum is truncated at floor(C2 * b) since K2 has compact support;
/// the transpose pairing makes the result symmetric by construction. The
/// output is not guaranteed positive semidefinite in finite samples.
LocalCovariance longrun_cov(const FunctionalSeries& series, double u, double h, double b,
                            const SmoothingKernel& k1, const LagWindowKernel& k2);

/// Quadrature value of the quadratic form <C direction, direction>; feeds the
/// CLT standardization. The direction must have unit quadrature norm.
double longrun_direction_value(const LocalCovariance& cov, const Eigen::VectorXd& direction);

} // namespace lsfts

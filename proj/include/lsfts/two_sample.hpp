#pragma once

#include <cstdint>
#include <vector>

#include "lsfts/kernels.hpp"
#include "lsfts/operators.hpp"
#include "lsfts/series.hpp"

namespace lsfts {

/// How the reported p-value is computed: chi-square upper tail of the
/// variance-standardized statistic, or Monte Carlo draws from the weighted
/// chi-square null law of the unstandardized one.
enum class PValueMethod { chisq, mc_weighted };

/// Outcome of the projected two-sample tests of equal local mean functions.
struct TwoSampleResult {
    double statistic_U = 0.0;      ///< full scaled squared L2 distance
    double statistic_Ubar = 0.0;   ///< projected, eigenvalue-weighted limit
    double statistic_Utilde = 0.0; ///< projected and standardized, chi-square limit
    int q_used = 0;
    double p_value = 1.0;
    PValueMethod method = PValueMethod::chisq;
    double theta_hat = 0.5;        ///< T1 / (T1 + T2)
};

/// Scaled squared L2 distance of the two local means at u:
///   U = (T1 T2 h / (T1 + T2)) ||Xbar_u - Ybar_u||^2 .
double u_statistic(const FunctionalSeries& x, const FunctionalSeries& y, double u, double h,
                   const SmoothingKernel& kernel);

/// Pooled long-run kernel (1 - theta_hat) c1_hat + theta_hat c2_hat with
/// theta_hat = T1/(T1+T2); the asymptotic covariance of the scaled mean
/// difference up to the int K1^2 factor.
LocalCovariance pooled_longrun(const FunctionalSeries& x, const FunctionalSeries& y, double u,
                               double h, double b, const SmoothingKernel& k1,
                               const LagWindowKernel& k2);

/// Eigenvalue-ratio order selector. Eigenvalues with |e_j / e_1| < eps0 are
/// zeroed first; returns argmin over 1 <= j <= q_bar of e_{j+1}/e_j with
/// 0/0 := 1, ties broken by the smallest j. Requires q_bar < len(e) and a
/// nonzero spectrum.
int select_q_ratio(const Eigen::VectorXd& eigenvalues, int q_bar, double eps0);

/// Projected two-sample tests. The pooled long-run kernel is eigendecomposed
/// (negative eigenvalues clipped to zero) and its eigenvalues are scaled by
/// int K1^2 so that the standardized statistic is chi-square(q) calibrated:
///
///   Ubar = scale * sum_{j<=q} <d, v_j>^2
///   Util = scale * sum_{j<=q} <d, v_j>^2 / eta_j,   scale = T1 T2 h/(T1+T2)
///
/// with d the difference of local means and eta_j the scaled eigenvalues.
/// q <= 0 selects the order by the ratio rule with q_bar = min(10, n-1).
/// Raises InvalidArgument when eta_q < eps0 * eta_1 (the standardized
/// statistic is undefined on a rank-deficient spectrum).
TwoSampleResult projected_tests(const FunctionalSeries& x, const FunctionalSeries& y, double u,
                                double h, double b, int q, const SmoothingKernel& k1,
                                const LagWindowKernel& k2, double eps0 = 1e-4,
                                PValueMethod method = PValueMethod::chisq,
                                long n_mc = 100000, std::uint64_t mc_seed = 20210428);

/// Monte Carlo upper-tail probability of sum_j w_j N_j^2 at `observed`,
/// deterministic given the seed (and independent of how the draws are split
/// across threads).
double pvalue_weighted_chisq(const std::vector<double>& weights, double observed, long n_mc,
                             std::uint64_t seed);

/// Upper tail of the chi-square distribution with q degrees of freedom.
double chisq_upper_tail(int q, double x);

} // namespace lsfts

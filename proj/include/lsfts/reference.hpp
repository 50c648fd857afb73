#pragma once

#include "lsfts/kernels.hpp"
#include "lsfts/operators.hpp"
#include "lsfts/series.hpp"

namespace lsfts::reference {

/// Serial reference implementations of every covariance-type estimator,
/// written as literal triple loops in the displayed summation order with the
/// kernel evaluated term by term. They share nothing with the OpenMP kernels
/// except the pointwise kernel functions, and exist so the optimized paths
/// can be checked against them (and timed against them by the benchmark).

Eigen::VectorXd local_mean(const FunctionalSeries& series, double u, double h,
                           const SmoothingKernel& kernel);

LocalCovariance local_cov(const FunctionalSeries& series, double u, double h,
                          const SmoothingKernel& kernel, bool center);

LocalCovariance local_autocov(const FunctionalSeries& series, double u, double h,
                              const SmoothingKernel& kernel, long lag);

LocalCovariance longrun_cov(const FunctionalSeries& series, double u, double h, double b,
                            const SmoothingKernel& k1, const LagWindowKernel& k2);

LocalCovariance prediction_cov(const FunctionalSeries& observed, long T, double u, double h,
                               const SmoothingKernel& kernel, bool center);

} // namespace lsfts::reference

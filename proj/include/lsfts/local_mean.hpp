#pragma once

#include <string>
#include <vector>

#include "lsfts/kernels.hpp"
#include "lsfts/series.hpp"

namespace lsfts {

/// Locally weighted sample mean at rescaled time u: the kernel-weighted
/// average of the observed curves with the selected weight mode.
Eigen::VectorXd local_mean(const FunctionalSeries& series, double u, double h,
                           const SmoothingKernel& kernel, WeightMode mode = WeightMode::paper);

/// Local means along a path of rescaled times. Rows are evaluated
/// independently; a failure at one u (for example an empty window) is
/// recorded in `errors` and its row is filled with NaN instead of aborting
/// the whole path.
struct MeanPath {
    Eigen::MatrixXd values;          ///< |u_list| x n
    std::vector<std::string> errors; ///< per row; empty string on success
};

MeanPath mean_path(const FunctionalSeries& series, const std::vector<double>& u_list, double h,
                   const SmoothingKernel& kernel, WeightMode mode = WeightMode::paper);

/// Standardized projection of the locally weighted mean:
///
///   sqrt(Th) <Xbar_u - m(u,.), direction> / sqrt(longrun_value * int K1^2)
///
/// where `longrun_value` is the long-run kernel quadratic form in the given
/// direction. Under the model this is asymptotically standard normal. The
/// mean curve defaults to zero (zero-mean processes); pass `mean_curve` when
/// the model has a nonzero local mean. The direction must have unit
/// quadrature norm.
double clt_standardize(const FunctionalSeries& series, double u, double h,
                       const SmoothingKernel& kernel, const Eigen::VectorXd& direction,
                       double longrun_value, const Eigen::VectorXd* mean_curve = nullptr);

} // namespace lsfts

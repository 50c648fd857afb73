#include "lsfts/local_mean.hpp"

#include <cmath>
#include <limits>

namespace lsfts {

Eigen::VectorXd local_mean(const FunctionalSeries& series, double u, double h,
                           const SmoothingKernel& kernel, WeightMode mode) {
    const LocalWeights lw = local_weights(u, series.length(), h, kernel, mode);
    const Eigen::Index rows = lw.hi - lw.lo;
    return series.values.middleRows(lw.lo, rows).transpose() * lw.w.segment(lw.lo, rows);
}

MeanPath mean_path(const FunctionalSeries& series, const std::vector<double>& u_list, double h,
                   const SmoothingKernel& kernel, WeightMode mode) {
    MeanPath path;
    path.values.resize(static_cast<Eigen::Index>(u_list.size()), series.grid.size());
    path.errors.resize(u_list.size());
    for (std::size_t i = 0; i < u_list.size(); ++i) {
        try {
            path.values.row(static_cast<Eigen::Index>(i)) =
                local_mean(series, u_list[i], h, kernel, mode).transpose();
        } catch (const Error& e) {
            path.values.row(static_cast<Eigen::Index>(i))
                .setConstant(std::numeric_limits<double>::quiet_NaN());
            path.errors[i] = e.what();
        }
    }
    return path;
}

double clt_standardize(const FunctionalSeries& series, double u, double h,
                       const SmoothingKernel& kernel, const Eigen::VectorXd& direction,
                       double longrun_value, const Eigen::VectorXd* mean_curve) {
    const double dir_norm = inner_product(direction, direction, series.grid);
    if (std::abs(dir_norm - 1.0) > 1e-6)
        throw InvalidArgument("clt_standardize: direction must have unit quadrature norm");
    if (!(longrun_value > 0.0))
        throw InvalidArgument("clt_standardize: degenerate direction, long-run value must be positive");

    Eigen::VectorXd centered = local_mean(series, u, h, kernel, WeightMode::paper);
    if (mean_curve != nullptr) {
        if (mean_curve->size() != series.grid.size())
            throw InvalidArgument("clt_standardize: mean curve length does not match the grid");
        centered -= *mean_curve;
    }

    const double th = static_cast<double>(series.length()) * h;
    const double proj = inner_product(centered, direction, series.grid);
    return std::sqrt(th) * proj / std::sqrt(longrun_value * k1_squared_integral(kernel));
}

} // namespace lsfts

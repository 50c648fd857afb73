#include "lsfts/longrun.hpp"

#include <cmath>

#include "lsfts/local_covariance.hpp"
#include "lsfts/local_mean.hpp"

namespace lsfts {

namespace {

/// Lag-`lag` surface from a pre-centered block: rows [lo, hi) of the series
/// are active, centered values live in `centered` for all rows up to hi.
/// kernel(i,j) = sum_{r in window, r >= lag} w_r centered(r,i) centered(r-lag,j).
Eigen::MatrixXd lag_surface(const Eigen::MatrixXd& centered, const Eigen::VectorXd& w,
                            Eigen::Index lo, Eigen::Index hi, long lag) {
    const Eigen::Index n = centered.cols();
    const Eigen::Index start = std::max<Eigen::Index>(lo, lag);
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);

#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        const double* ci = centered.col(i).data();
        for (Eigen::Index j = 0; j < n; ++j) {
            const double* cj = centered.col(j).data();
            double acc = 0.0;
            for (Eigen::Index r = start; r < hi; ++r) acc += w(r) * ci[r] * cj[r - lag];
            k(i, j) = acc;
        }
    }
    return k;
}

} // namespace

LocalCovariance local_autocov(const FunctionalSeries& series, double u, double h,
                              const SmoothingKernel& kernel, long lag) {
    const long T = series.length();
    if (lag < 1 || lag > T - 1)
        throw InvalidArgument("local_autocov: lag must lie in [1, T-1], got " +
                              std::to_string(lag));

    const LocalWeights lw = local_weights(u, T, h, kernel, WeightMode::paper);
    const Eigen::VectorXd mean = local_mean(series, u, h, kernel, WeightMode::paper);
    Eigen::MatrixXd centered = series.values.rowwise() - mean.transpose();

    LocalCovariance cov;
    cov.kernel = lag_surface(centered, lw.w, lw.lo, lw.hi, lag);
    cov.grid = series.grid;
    cov.u = u;
    cov.h = h;
    return cov;
}

LocalCovariance longrun_cov(const FunctionalSeries& series, double u, double h, double b,
                            const SmoothingKernel& k1, const LagWindowKernel& k2) {
    if (!(b > 0.0))
        throw InvalidArgument("longrun_cov: lag-window bandwidth b must be positive");

    const long T = series.length();
    const LocalWeights lw = local_weights(u, T, h, k1, WeightMode::paper);
    const Eigen::VectorXd mean = series.values.middleRows(lw.lo, lw.hi - lw.lo).transpose() *
                                 lw.w.segment(lw.lo, lw.hi - lw.lo);
    const Eigen::MatrixXd centered = series.values.rowwise() - mean.transpose();

    // Lag zero is the centered local covariance itself.
    Eigen::MatrixXd k = lag_surface(centered, lw.w, lw.lo, lw.hi, 0);

    // K2 vanishes past C2*b, so the lag sum stops there instead of at T-1.
    const long max_lag = std::min<long>(T - 1, static_cast<long>(std::floor(k2.support_radius * b)));
    for (long lag = 1; lag <= max_lag; ++lag) {
        const double taper = k2_eval(k2, static_cast<double>(lag) / b);
        if (taper == 0.0) continue;
        const Eigen::MatrixXd g = lag_surface(centered, lw.w, lw.lo, lw.hi, lag);
        k += taper * (g + g.transpose());
    }

    LocalCovariance cov;
    cov.kernel = std::move(k);
    cov.grid = series.grid;
    cov.u = u;
    cov.h = h;
    return cov;
}

double longrun_direction_value(const LocalCovariance& cov, const Eigen::VectorXd& direction) {
    if (direction.size() != cov.grid.size())
        throw InvalidArgument("longrun_direction_value: direction length does not match the grid");
    const Eigen::VectorXd weighted = cov.grid.weights.asDiagonal() * direction;
    return weighted.dot(cov.kernel * weighted);
}

} // namespace lsfts

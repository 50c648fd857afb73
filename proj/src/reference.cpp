#include "lsfts/reference.hpp"

#include <cmath>

namespace lsfts::reference {

// Everything here follows the displayed estimator formulas term by term:
// one scalar kernel evaluation and one division by Th per summand, no
// precomputed weight vectors, no symmetry shortcuts.

Eigen::VectorXd local_mean(const FunctionalSeries& series, double u, double h,
                           const SmoothingKernel& kernel) {
    const long T = series.length();
    const Eigen::Index n = series.grid.size();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (long t = 1; t <= T; ++t)
            acc += k1_eval(kernel, (u - static_cast<double>(t) / T) / h) / (T * h) *
                   series.values(t - 1, i);
        mean(i) = acc;
    }
    return mean;
}

LocalCovariance local_cov(const FunctionalSeries& series, double u, double h,
                          const SmoothingKernel& kernel, bool center) {
    const long T = series.length();
    const Eigen::Index n = series.grid.size();
    const Eigen::VectorXd mean =
        center ? local_mean(series, u, h, kernel) : Eigen::VectorXd::Zero(n).eval();

    LocalCovariance cov;
    cov.kernel.resize(n, n);
    cov.grid = series.grid;
    cov.u = u;
    cov.h = h;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double acc = 0.0;
            for (long t = 1; t <= T; ++t) {
                const double k = k1_eval(kernel, (u - static_cast<double>(t) / T) / h) / (T * h);
                acc += k * (series.values(t - 1, i) - mean(i)) *
                       (series.values(t - 1, j) - mean(j));
            }
            cov.kernel(i, j) = acc;
        }
    }
    return cov;
}

LocalCovariance local_autocov(const FunctionalSeries& series, double u, double h,
                              const SmoothingKernel& kernel, long lag) {
    const long T = series.length();
    if (lag < 1 || lag > T - 1)
        throw InvalidArgument("reference::local_autocov: lag must lie in [1, T-1]");
    const Eigen::Index n = series.grid.size();
    const Eigen::VectorXd mean = local_mean(series, u, h, kernel);

    LocalCovariance cov;
    cov.kernel.resize(n, n);
    cov.grid = series.grid;
    cov.u = u;
    cov.h = h;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double acc = 0.0;
            for (long t = lag + 1; t <= T; ++t) {
                const double k = k1_eval(kernel, (u - static_cast<double>(t) / T) / h) / (T * h);
                acc += k * (series.values(t - 1, i) - mean(i)) *
                       (series.values(t - 1 - lag, j) - mean(j));
            }
            cov.kernel(i, j) = acc;
        }
    }
    return cov;
}

LocalCovariance longrun_cov(const FunctionalSeries& series, double u, double h, double b,
                            const SmoothingKernel& k1, const LagWindowKernel& k2) {
    if (!(b > 0.0)) throw InvalidArgument("reference::longrun_cov: b must be positive");
    const long T = series.length();

    LocalCovariance cov = local_cov(series, u, h, k1, /*center=*/true);
    const long max_lag = std::min<long>(T - 1, static_cast<long>(std::floor(k2.support_radius * b)));
    for (long lag = 1; lag <= max_lag; ++lag) {
        const double taper = k2_eval(k2, static_cast<double>(lag) / b);
        if (taper == 0.0) continue;
        const LocalCovariance g = local_autocov(series, u, h, k1, lag);
        cov.kernel += taper * (g.kernel + g.kernel.transpose());
    }
    return cov;
}

LocalCovariance prediction_cov(const FunctionalSeries& observed, long T, double u, double h,
                               const SmoothingKernel& kernel, bool center) {
    const long T1 = observed.length();
    if (T1 >= T) throw InvalidArgument("reference::prediction_cov: need T1 < T");
    const Eigen::Index n = observed.grid.size();

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    if (center) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double acc = 0.0;
            for (long t = 1; t <= T1; ++t)
                acc += 2.0 * k1_eval(kernel, (u - static_cast<double>(t) / T) / h) / (T * h) *
                       observed.values(t - 1, i);
            mean(i) = acc;
        }
    }

    LocalCovariance cov;
    cov.kernel.resize(n, n);
    cov.grid = observed.grid;
    cov.u = u;
    cov.h = h;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double acc = 0.0;
            for (long t = 1; t <= T1; ++t) {
                const double k =
                    2.0 * k1_eval(kernel, (u - static_cast<double>(t) / T) / h) / (T * h);
                acc += k * (observed.values(t - 1, i) - mean(i)) *
                       (observed.values(t - 1, j) - mean(j));
            }
            cov.kernel(i, j) = acc;
        }
    }
    return cov;
}

} // namespace lsfts::reference

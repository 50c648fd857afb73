#include "lsfts/kernels.hpp"

#include <cmath>

namespace lsfts {

double k1_eval(const SmoothingKernel& kernel, double v) {
    const double a = std::abs(v);
    if (a > kernel.support_radius) return 0.0;
    switch (kernel.id) {
        case SmoothingKernelId::epanechnikov:
            return 0.75 * (1.0 - v * v);
        case SmoothingKernelId::triangular:
            return 1.0 - a;
        case SmoothingKernelId::quartic: {
            const double t = 1.0 - v * v;
            return (15.0 / 16.0) * t * t;
        }
    }
    return 0.0;
}

double k2_eval(const LagWindowKernel& kernel, double v) {
    const double a = std::abs(v);
    if (a > kernel.support_radius) return 0.0;
    switch (kernel.id) {
        case LagWindowId::bartlett:
            return 1.0 - a;
        case LagWindowId::parzen:
            if (a <= 0.5) return 1.0 - 6.0 * a * a + 6.0 * a * a * a;
            return 2.0 * std::pow(1.0 - a, 3);
        case LagWindowId::truncated:
            return 1.0;
    }
    return 0.0;
}

double k1_squared_integral(const SmoothingKernel& kernel) {
    // Composite Simpson over the support; cached per kernel id. The grid is
    // fine enough that the result is exact to well below 1e-8 (0.6 for
    // Epanechnikov, 2/3 triangular, 5/7 quartic).
    static thread_local double cache[3] = {-1.0, -1.0, -1.0};
    const int idx = static_cast<int>(kernel.id);
    if (cache[idx] >= 0.0) return cache[idx];

    const double c = kernel.support_radius;
    const int segments = 20000;
    const double step = 2.0 * c / segments;
    double acc = 0.0;
    for (int i = 0; i <= segments; ++i) {
        const double v = -c + i * step;
        const double f = k1_eval(kernel, v) * k1_eval(kernel, v);
        const double coeff = (i == 0 || i == segments) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += coeff * f;
    }
    cache[idx] = acc * step / 3.0;
    return cache[idx];
}

double default_bandwidth_h(long T, BandwidthMode mode) {
    if (T < 2) throw InvalidArgument("default_bandwidth_h: need T >= 2");
    const double exponent = (mode == BandwidthMode::estimation) ? -1.0 / 3.0 : -0.4;
    return std::pow(static_cast<double>(T), exponent);
}

double default_bandwidth_b(long T, double h) {
    const double th = static_cast<double>(T) * h;
    if (!(th > 1.0))
        throw InvalidArgument("default_bandwidth_b: requires T*h > 1, got " + std::to_string(th));
    return std::cbrt(th);
}

LocalWeights local_weights(double u, long T, double h, const SmoothingKernel& kernel,
                           WeightMode mode) {
    if (u < 0.0 || u > 1.0)
        throw InvalidArgument("local_weights: u must lie in [0, 1]");
    if (!(h > 0.0))
        throw InvalidArgument("local_weights: bandwidth h must be positive");
    if (T < 1)
        throw InvalidArgument("local_weights: need T >= 1");

    const double c1h = kernel.support_radius * h;

    LocalWeights lw;
    lw.w = Eigen::VectorXd::Zero(T);
    lw.boundary = (u < c1h) || (u > 1.0 - c1h);

    // |u - t/T| <= C1 h restricts t to [T(u - C1 h), T(u + C1 h)].
    long t_first = static_cast<long>(std::ceil((u - c1h) * T));
    long t_last = static_cast<long>(std::floor((u + c1h) * T));
    t_first = std::max<long>(1, t_first);
    t_last = std::min<long>(T, t_last);

    double kernel_sum = 0.0;
    for (long t = t_first; t <= t_last; ++t) {
        const double k = k1_eval(kernel, (u - static_cast<double>(t) / T) / h);
        lw.w(t - 1) = k;
        kernel_sum += k;
    }
    if (t_last < t_first || kernel_sum <= 0.0)
        throw EmptyWindowError("local_weights: every kernel weight vanishes at u=" +
                               std::to_string(u) + ", h=" + std::to_string(h));

    const double denom = (mode == WeightMode::paper) ? static_cast<double>(T) * h : kernel_sum;
    lw.w.segment(t_first - 1, t_last - t_first + 1) /= denom;
    lw.lo = t_first - 1;
    lw.hi = t_last;
    lw.sum = kernel_sum / denom;
    return lw;
}

} // namespace lsfts

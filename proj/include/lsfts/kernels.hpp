#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "lsfts/errors.hpp"

namespace lsfts {

/// Smoothing kernel used for the local weights K1((u - t/T)/h). All built-in
/// choices are symmetric densities supported on [-1, 1].
enum class SmoothingKernelId { epanechnikov, triangular, quartic };

struct SmoothingKernel {
    SmoothingKernelId id = SmoothingKernelId::epanechnikov;
    double support_radius = 1.0; ///< C1: K1(v) = 0 for |v| > C1
};

/// Lag-window kernel K2 used to taper lagged autocovariances. K2(0) = 1 and
/// K2 vanishes outside [-C2, C2].
enum class LagWindowId { bartlett, parzen, truncated };

struct LagWindowKernel {
    LagWindowId id = LagWindowId::bartlett;
    double support_radius = 1.0; ///< C2
};

double k1_eval(const SmoothingKernel& kernel, double v);
double k2_eval(const LagWindowKernel& kernel, double v);

/// Integral of K1^2 over the support, evaluated numerically once per kernel
/// (Epanechnikov: exactly 0.6). Enters the variance of the locally weighted
/// mean and the calibration of the projected two-sample statistics.
double k1_squared_integral(const SmoothingKernel& kernel);

/// Bandwidth defaults. Estimation mode returns the rate-optimal T^{-1/3};
/// inference mode returns the undersmoothed T^{-0.4} so that T h^3 -> 0
/// along the default sequence, as the central limit theory requires.
enum class BandwidthMode { estimation, inference };

double default_bandwidth_h(long T, BandwidthMode mode);

/// Default lag-window bandwidth (T h)^{1/3}; requires T h > 1.
double default_bandwidth_b(long T, double h);

/// Weight modes for local estimators. `paper` uses w_t = K1((u-t/T)/h)/(Th),
/// matching the displayed estimators verbatim; `normalized` divides by the
/// kernel sum instead so the weights add to one (removes the O(1/(Th^2))
/// Riemann-sum bias that is visible at small T).
enum class WeightMode { paper, normalized };

struct LocalWeights {
    Eigen::VectorXd w;      ///< length T, zero outside the active window
    Eigen::Index lo = 0;    ///< active half-open row range [lo, hi)
    Eigen::Index hi = 0;
    double sum = 0.0;       ///< sum of all weights
    bool boundary = false;  ///< u outside [C1 h, 1 - C1 h]
};

/// Kernel weight vector over times t = 1..T for rescaled time u. Throws
/// EmptyWindowError when every weight vanishes.
LocalWeights local_weights(double u, long T, double h, const SmoothingKernel& kernel,
                           WeightMode mode = WeightMode::paper);

} // namespace lsfts

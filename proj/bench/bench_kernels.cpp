// Times the OpenMP estimator kernels against the serial triple-loop
// references and checks that both paths agree to tight absolute tolerance.
// Run with --quick for the small sizes used by ctest.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lsfts/kernels.hpp"
#include "lsfts/local_covariance.hpp"
#include "lsfts/longrun.hpp"
#include "lsfts/prediction.hpp"
#include "lsfts/reference.hpp"
#include "lsfts/rng.hpp"
#include "lsfts/series.hpp"

using namespace lsfts;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

FunctionalSeries random_series(long T, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd values(T, n);
    for (long t = 0; t < T; ++t)
        for (int i = 0; i < n; ++i) values(t, i) = normal(rng);
    return make_series(std::move(values), make_uniform_grid(n));
}

struct Case {
    const char* name;
    LocalCovariance fast;
    LocalCovariance slow;
    double fast_s;
    double slow_s;
};

} // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const long T = quick ? 200 : 4000;
    const int n = quick ? 12 : 64;
    const double u = 0.5;
    const double h = default_bandwidth_h(T, BandwidthMode::inference);
    const double b = default_bandwidth_b(T, h);
    const SmoothingKernel k1{};
    const LagWindowKernel k2{};

    const FunctionalSeries x = random_series(T, n, 7);

    std::vector<Case> cases;
    {
        auto t0 = std::chrono::steady_clock::now();
        LocalCovariance fast = local_cov(x, u, h, k1, true);
        const double tf = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        LocalCovariance slow = reference::local_cov(x, u, h, k1, true);
        cases.push_back({"local_cov", std::move(fast), std::move(slow), tf, seconds_since(t0)});
    }
    {
        auto t0 = std::chrono::steady_clock::now();
        LocalCovariance fast = local_autocov(x, u, h, k1, 2);
        const double tf = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        LocalCovariance slow = reference::local_autocov(x, u, h, k1, 2);
        cases.push_back({"local_autocov", std::move(fast), std::move(slow), tf, seconds_since(t0)});
    }
    {
        auto t0 = std::chrono::steady_clock::now();
        LocalCovariance fast = longrun_cov(x, u, h, b, k1, k2);
        const double tf = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        LocalCovariance slow = reference::longrun_cov(x, u, h, b, k1, k2);
        cases.push_back({"longrun_cov", std::move(fast), std::move(slow), tf, seconds_since(t0)});
    }
    {
        const FunctionalSeries head = make_series(x.values.topRows(T - T / 10), x.grid);
        auto t0 = std::chrono::steady_clock::now();
        LocalCovariance fast = prediction_cov(head, T, 0.5, h, k1, true);
        const double tf = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        LocalCovariance slow = reference::prediction_cov(head, T, 0.5, h, k1, true);
        cases.push_back({"prediction_cov", std::move(fast), std::move(slow), tf, seconds_since(t0)});
    }

#ifdef _OPENMP
    std::printf("threads=%d T=%ld n=%d h=%.4g b=%.4g\n", omp_get_max_threads(), T, n, h, b);
#else
    std::printf("threads=1 (OpenMP off) T=%ld n=%d h=%.4g b=%.4g\n", T, n, h, b);
#endif
    std::printf("%-16s %12s %12s %9s %12s\n", "kernel", "omp [ms]", "reference [ms]", "speedup",
                "max |diff|");

    int failures = 0;
    for (const Case& c : cases) {
        const double diff = (c.fast.kernel - c.slow.kernel).cwiseAbs().maxCoeff();
        std::printf("%-16s %12.3f %12.3f %9.2f %12.3e\n", c.name, 1e3 * c.fast_s, 1e3 * c.slow_s,
                    c.slow_s / std::max(c.fast_s, 1e-9), diff);
        if (!(diff < 1e-10)) {
            std::printf("  MISMATCH: %s disagrees with its reference\n", c.name);
            ++failures;
        }
    }
    return failures;
}

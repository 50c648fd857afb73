#include "lsfts/two_sample.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "lsfts/local_mean.hpp"
#include "lsfts/longrun.hpp"
#include "lsfts/rng.hpp"

namespace lsfts {

namespace {

double pair_scale(long T1, long T2, double h) {
    return static_cast<double>(T1) * static_cast<double>(T2) * h /
           static_cast<double>(T1 + T2);
}

void require_shared_grid(const FunctionalSeries& x, const FunctionalSeries& y,
                         const char* where) {
    if (!same_grid(x.grid, y.grid))
        throw InvalidArgument(std::string(where) + ": the two samples live on different grids");
}

} // namespace

double u_statistic(const FunctionalSeries& x, const FunctionalSeries& y, double u, double h,
                   const SmoothingKernel& kernel) {
    require_shared_grid(x, y, "u_statistic");
    const Eigen::VectorXd diff = local_mean(x, u, h, kernel, WeightMode::paper) -
                                 local_mean(y, u, h, kernel, WeightMode::paper);
    const double norm2 = inner_product(diff, diff, x.grid);
    return pair_scale(x.length(), y.length(), h) * norm2;
}

LocalCovariance pooled_longrun(const FunctionalSeries& x, const FunctionalSeries& y, double u,
                               double h, double b, const SmoothingKernel& k1,
                               const LagWindowKernel& k2) {
    require_shared_grid(x, y, "pooled_longrun");
    const double theta = static_cast<double>(x.length()) /
                         static_cast<double>(x.length() + y.length());
    const LocalCovariance cx = longrun_cov(x, u, h, b, k1, k2);
    const LocalCovariance cy = longrun_cov(y, u, h, b, k1, k2);

    LocalCovariance pooled;
    pooled.kernel = (1.0 - theta) * cx.kernel + theta * cy.kernel;
    pooled.grid = x.grid;
    pooled.u = u;
    pooled.h = h;
    return pooled;
}

int select_q_ratio(const Eigen::VectorXd& eigenvalues, int q_bar, double eps0) {
    const Eigen::Index len = eigenvalues.size();
    if (q_bar < 1 || q_bar >= len)
        throw InvalidArgument("select_q_ratio: need 1 <= q_bar < len(eigenvalues)");
    if (!(eps0 > 0.0))
        throw InvalidArgument("select_q_ratio: eps0 must be positive");

    const double top = std::abs(eigenvalues(0));
    if (top == 0.0)
        throw InvalidArgument("select_q_ratio: order is undefined for an all-zero spectrum");

    // Small eigenvalues are treated as exact zeros before the ratios are
    // formed, with the convention 0/0 = 1.
    Eigen::VectorXd e = eigenvalues;
    for (Eigen::Index j = 0; j < len; ++j)
        if (std::abs(e(j) / top) < eps0) e(j) = 0.0;

    int best_j = 1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= q_bar; ++j) {
        const double num = e(j);
        const double den = e(j - 1);
        const double ratio = (den == 0.0) ? (num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity())
                                          : num / den;
        if (ratio < best_ratio) {
            best_ratio = ratio;
            best_j = j;
        }
    }
    return best_j;
}

double chisq_upper_tail(int q, double x) {
    if (q < 1) throw InvalidArgument("chisq_upper_tail: degrees of freedom must be positive");
    if (x <= 0.0) return 1.0;
    boost::math::chi_squared dist(static_cast<double>(q));
    return boost::math::cdf(boost::math::complement(dist, x));
}

double pvalue_weighted_chisq(const std::vector<double>& weights, double observed, long n_mc,
                             std::uint64_t seed) {
    if (n_mc < 1000)
        throw InvalidArgument("pvalue_weighted_chisq: need at least 1000 draws");
    for (double w : weights)
        if (w < 0.0) throw InvalidArgument("pvalue_weighted_chisq: weights must be nonnegative");
    if (observed <= 0.0) return 1.0;

    double total = 0.0;
    for (double w : weights) total += w;
    if (total == 0.0) return 0.0; // degenerate null mass at zero, observed > 0

    // Fixed-size blocks with per-block seeds keep the draw sequence (and the
    // p-value) identical for any thread count.
    const long block_size = 8192;
    const long n_blocks = (n_mc + block_size - 1) / block_size;
    long count = 0;

#pragma omp parallel for schedule(static) reduction(+ : count)
    for (long blk = 0; blk < n_blocks; ++blk) {
        NormalSampler normal(split_seed(seed, static_cast<std::uint64_t>(blk)));
        const long lo = blk * block_size;
        const long hi = std::min(n_mc, lo + block_size);
        long local = 0;
        for (long i = lo; i < hi; ++i) {
            double draw = 0.0;
            for (double w : weights) {
                const double z = normal();
                draw += w * z * z;
            }
            if (draw >= observed) ++local;
        }
        count += local;
    }
    return static_cast<double>(count) / static_cast<double>(n_mc);
}

TwoSampleResult projected_tests(const FunctionalSeries& x, const FunctionalSeries& y, double u,
                                double h, double b, int q, const SmoothingKernel& k1,
                                const LagWindowKernel& k2, double eps0, PValueMethod method,
                                long n_mc, std::uint64_t mc_seed) {
    require_shared_grid(x, y, "projected_tests");
    const Eigen::Index n = x.grid.size();

    const LocalCovariance pooled = pooled_longrun(x, y, u, h, b, k1, k2);
    EigenSystem es = operator_eigh(pooled, static_cast<int>(n));
    clip_negative_eigenvalues(es);

    // The limit covariance of the scaled mean difference is the pooled
    // long-run kernel times int K1^2; folding that factor into the
    // eigenvalues makes the standardized statistic chi-square calibrated.
    const Eigen::VectorXd eta = k1_squared_integral(k1) * es.eigenvalues;

    int q_used = q;
    if (q_used <= 0)
        q_used = select_q_ratio(eta, static_cast<int>(std::min<Eigen::Index>(10, n - 1)), eps0);
    if (q_used > n)
        throw InvalidArgument("projected_tests: q exceeds the grid size");
    if (eta(q_used - 1) < eps0 * eta(0))
        throw InvalidArgument("projected_tests: spectrum is rank deficient at q=" +
                              std::to_string(q_used) +
                              "; the standardized statistic is undefined");

    const Eigen::VectorXd diff = local_mean(x, u, h, k1, WeightMode::paper) -
                                 local_mean(y, u, h, k1, WeightMode::paper);
    const double scale = pair_scale(x.length(), y.length(), h);

    TwoSampleResult result;
    result.statistic_U = scale * inner_product(diff, diff, x.grid);
    result.q_used = q_used;
    result.theta_hat = static_cast<double>(x.length()) /
                       static_cast<double>(x.length() + y.length());
    result.method = method;

    std::vector<double> mc_weights(static_cast<std::size_t>(q_used));
    for (int j = 0; j < q_used; ++j) {
        const double proj = inner_product(diff, es.eigenfunctions.col(j), x.grid);
        result.statistic_Ubar += scale * proj * proj;
        result.statistic_Utilde += scale * proj * proj / eta(j);
        mc_weights[static_cast<std::size_t>(j)] = eta(j);
    }

    result.p_value = (method == PValueMethod::chisq)
                         ? chisq_upper_tail(q_used, result.statistic_Utilde)
                         : pvalue_weighted_chisq(mc_weights, result.statistic_Ubar, n_mc, mc_seed);
    return result;
}

} // namespace lsfts

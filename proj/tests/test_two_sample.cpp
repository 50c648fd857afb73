#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "lsfts/longrun.hpp"
#include "lsfts/rng.hpp"
#include "lsfts/two_sample.hpp"

using namespace lsfts;
using lsfts::test::constant_path;
using lsfts::test::constant_series;
using lsfts::test::linear_path;
using lsfts::test::random_series;

namespace {

const SmoothingKernel kEpan{};
const LagWindowKernel kBartlett{};

/// The null model used by the manifest's two-sample experiments.
sim::SimConfig null_model(std::uint64_t seed) {
    sim::SimConfig cfg;
    cfg.components.push_back({linear_path(0.05, 0.1), constant_path(0.8)});
    cfg.components.push_back({constant_path(0.1), constant_path(0.5)});
    cfg.components.push_back({constant_path(0.05), constant_path(0.3)});
    cfg.mean.push_back({linear_path(0.0, 0.5), 1});
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_SUITE("two_sample") {

TEST_CASE("identical samples give a zero statistic") {
    const FunctionalSeries x = random_series(80, 15, 1);
    CHECK(u_statistic(x, x, 0.5, 0.1, kEpan) == 0.0);
}

TEST_CASE("statistic from a constructed mean difference") {
    const Grid g = make_uniform_grid(25);
    const Eigen::VectorXd phi = sim::fourier_basis(2, g);
    const long T1 = 50, T2 = 70;
    const double u = 0.5, h = 0.15, c = 0.8;

    const FunctionalSeries x = constant_series(T1, Eigen::VectorXd::Zero(25), g);
    const FunctionalSeries y = constant_series(T2, (c * phi).eval(), g);

    const double sy = local_weights(u, T2, h, kEpan, WeightMode::paper).sum;
    const double scale = static_cast<double>(T1) * T2 * h / (T1 + T2);
    const double expected = scale * sy * sy * c * c * inner_product(phi, phi, g);
    CHECK(u_statistic(x, y, u, h, kEpan) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("grids must match") {
    const FunctionalSeries x = random_series(20, 11, 1);
    const FunctionalSeries y = random_series(20, 13, 1);
    CHECK_THROWS_AS(u_statistic(x, y, 0.5, 0.1, kEpan), InvalidArgument);
    CHECK_THROWS_AS(pooled_longrun(x, y, 0.5, 0.1, 2.0, kEpan, kBartlett), InvalidArgument);
}

TEST_CASE("null distribution of the statistic matches its weighted chi-square law") {
    const Grid g = make_uniform_grid(31);
    const long T = 1000;
    const double u = 0.5;
    const double h = default_bandwidth_h(T, BandwidthMode::inference);
    const int reps = 600;

    std::vector<double> sample(reps);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < reps; ++r) {
        const FunctionalSeries x =
            sim::simulate_lsfts(null_model(split_seed(41, 2 * static_cast<std::uint64_t>(r))), T, g);
        const FunctionalSeries y = sim::simulate_lsfts(
            null_model(split_seed(41, 2 * static_cast<std::uint64_t>(r) + 1)), T, g);
        sample[static_cast<std::size_t>(r)] = u_statistic(x, y, u, h, kEpan);
    }

    // Reference draws from the analytic spectrum of the pooled long-run
    // operator scaled by int K1^2.
    const sim::OracleSpectrum spec = sim::true_longrun_spectrum(null_model(1), u);
    const double ik2 = k1_squared_integral(kEpan);
    const int n_ref = 200000;
    std::vector<double> reference(n_ref);
    NormalSampler normal(split_seed(42, 0));
    for (int i = 0; i < n_ref; ++i) {
        double draw = 0.0;
        for (Eigen::Index j = 0; j < spec.values.size(); ++j) {
            const double z = normal();
            draw += ik2 * spec.values(j) * z * z;
        }
        reference[static_cast<std::size_t>(i)] = draw;
    }

    std::sort(sample.begin(), sample.end());
    std::sort(reference.begin(), reference.end());
    double ks = 0.0;
    for (int i = 0; i < reps; ++i) {
        const double x = sample[static_cast<std::size_t>(i)];
        const auto pos = std::upper_bound(reference.begin(), reference.end(), x);
        const double ref_cdf = static_cast<double>(pos - reference.begin()) / n_ref;
        ks = std::max(ks, std::max(std::abs(ref_cdf - static_cast<double>(i) / reps),
                                   std::abs(ref_cdf - static_cast<double>(i + 1) / reps)));
    }
    CHECK(ks < 0.08);
}

TEST_CASE("pooled long-run kernel combines the samples") {
    const FunctionalSeries x = random_series(60, 13, 5);
    const FunctionalSeries y = random_series(60, 13, 6);
    const double u = 0.5, h = 0.15, b = 2.0;

    const LocalCovariance cx = longrun_cov(x, u, h, b, kEpan, kBartlett);
    const LocalCovariance cy = longrun_cov(y, u, h, b, kEpan, kBartlett);
    const LocalCovariance pooled = pooled_longrun(x, y, u, h, b, kEpan, kBartlett);
    CHECK((pooled.kernel - 0.5 * (cx.kernel + cy.kernel)).cwiseAbs().maxCoeff() < 1e-15);

    const LocalCovariance self = pooled_longrun(x, x, u, h, b, kEpan, kBartlett);
    CHECK((self.kernel - cx.kernel).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pooled estimate approaches the analytic kernel") {
    const Grid g = make_uniform_grid(21);
    sim::SimConfig zero_mean = null_model(1);
    zero_mean.mean.clear();
    const LocalCovariance truth = sim::true_longrun_cov(zero_mean, 0.5, g);

    std::vector<double> small_errs, large_errs;
    for (int rep = 0; rep < 10; ++rep) {
        for (long T : {800L, 3200L}) {
            const double h = default_bandwidth_h(T, BandwidthMode::inference);
            const double b = default_bandwidth_b(T, h);
            const FunctionalSeries x = sim::simulate_lsfts(
                null_model(split_seed(71, static_cast<std::uint64_t>(10 * T + rep))), T, g);
            const FunctionalSeries y = sim::simulate_lsfts(
                null_model(split_seed(72, static_cast<std::uint64_t>(10 * T + rep))), T, g);
            const LocalCovariance pooled = pooled_longrun(x, y, 0.5, h, b, kEpan, kBartlett);
            const Eigen::MatrixXd diff = pooled.kernel - truth.kernel;
            const Eigen::VectorXd& w = g.weights;
            const double err =
                (w.asDiagonal() * diff.cwiseProduct(diff) * w.asDiagonal()).sum();
            (T == 800 ? small_errs : large_errs).push_back(err);
        }
    }
    CHECK(lsfts::test::median_of(large_errs) < lsfts::test::median_of(small_errs));
}

TEST_CASE("ratio selector hand examples") {
    Eigen::VectorXd spectrum(5);
    spectrum << 4.0, 2.0, 1.0, 1e-12, 1e-13;
    CHECK(select_q_ratio(spectrum, 4, 1e-6) == 3);

    Eigen::VectorXd rank1(3);
    rank1 << 5.0, 0.0, 0.0;
    CHECK(select_q_ratio(rank1, 2, 1e-6) == 1);

    Eigen::VectorXd geometric(4);
    geometric << 8.0, 4.0, 2.0, 1.0;
    CHECK(select_q_ratio(geometric, 3, 1e-6) == 1);
}

TEST_CASE("ratio selector rejects degenerate inputs") {
    Eigen::VectorXd zeros = Eigen::VectorXd::Zero(4);
    CHECK_THROWS_AS(select_q_ratio(zeros, 2, 1e-4), InvalidArgument);
    Eigen::VectorXd ok(3);
    ok << 2.0, 1.0, 0.5;
    CHECK_THROWS_AS(select_q_ratio(ok, 3, 1e-4), InvalidArgument);
    CHECK_THROWS_AS(select_q_ratio(ok, 0, 1e-4), InvalidArgument);
    CHECK_THROWS_AS(select_q_ratio(ok, 1, 0.0), InvalidArgument);
}

TEST_CASE("weighted chi-square tail probabilities") {
    CHECK(std::abs(pvalue_weighted_chisq({1.0}, 3.841, 100000, 9) - 0.05) < 0.01);
    CHECK(std::abs(pvalue_weighted_chisq({1.0, 1.0}, 5.991, 100000, 9) - 0.05) < 0.01);
    CHECK(pvalue_weighted_chisq({0.5, 0.25}, 0.0, 1000, 1) == 1.0);
    CHECK(pvalue_weighted_chisq({0.0, 0.0}, 0.5, 1000, 1) == 0.0);
    CHECK_THROWS_AS(pvalue_weighted_chisq({1.0}, 1.0, 10, 1), InvalidArgument);
    CHECK_THROWS_AS(pvalue_weighted_chisq({-1.0}, 1.0, 5000, 1), InvalidArgument);

    // Deterministic given the seed.
    CHECK(pvalue_weighted_chisq({0.7, 0.2}, 1.3, 50000, 123) ==
          pvalue_weighted_chisq({0.7, 0.2}, 1.3, 50000, 123));
}

TEST_CASE("chi-square upper tail matches the quantile oracles") {
    CHECK(chisq_upper_tail(1, 3.841) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(chisq_upper_tail(2, 5.991) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(chisq_upper_tail(3, 0.0) == 1.0);
}

TEST_CASE("projected tests on identical samples") {
    const FunctionalSeries x = random_series(120, 21, 31);
    const TwoSampleResult res = projected_tests(x, x, 0.5, 0.1, 2.0, 2, kEpan, kBartlett);
    CHECK(res.statistic_U == 0.0);
    CHECK(res.statistic_Ubar == 0.0);
    CHECK(res.statistic_Utilde == 0.0);
    CHECK(res.p_value == 1.0);
    CHECK(res.q_used == 2);
    CHECK(res.theta_hat == doctest::Approx(0.5).epsilon(0.0));
}

TEST_CASE("scaling both samples leaves the standardized statistic invariant") {
    const Grid g = make_uniform_grid(21);
    const FunctionalSeries x = sim::simulate_lsfts(null_model(101), 400, g);
    const FunctionalSeries y = sim::simulate_lsfts(null_model(102), 400, g);
    const double u = 0.5, h = 0.12, b = 2.5;

    const TwoSampleResult base = projected_tests(x, y, u, h, b, 2, kEpan, kBartlett);

    const double c = 2.0;
    FunctionalSeries xs = x;
    FunctionalSeries ys = y;
    xs.values *= c;
    ys.values *= c;
    const TwoSampleResult scaled = projected_tests(xs, ys, u, h, b, 2, kEpan, kBartlett);

    CHECK(scaled.statistic_U == doctest::Approx(c * c * base.statistic_U).epsilon(1e-12));
    CHECK(scaled.statistic_Ubar == doctest::Approx(c * c * base.statistic_Ubar).epsilon(1e-12));
    CHECK(scaled.statistic_Utilde == doctest::Approx(base.statistic_Utilde).epsilon(1e-8));
}

TEST_CASE("swapping the samples changes nothing") {
    const Grid g = make_uniform_grid(21);
    const FunctionalSeries x = sim::simulate_lsfts(null_model(201), 300, g);
    const FunctionalSeries y = sim::simulate_lsfts(null_model(202), 500, g);
    const double u = 0.5, h = 0.12, b = 2.5;

    const TwoSampleResult a = projected_tests(x, y, u, h, b, 2, kEpan, kBartlett);
    const TwoSampleResult b2 = projected_tests(y, x, u, h, b, 2, kEpan, kBartlett);
    CHECK(std::abs(a.statistic_U - b2.statistic_U) < 1e-10);
    CHECK(std::abs(a.statistic_Ubar - b2.statistic_Ubar) < 1e-10);
    CHECK(std::abs(a.statistic_Utilde - b2.statistic_Utilde) < 1e-10);
    CHECK(a.theta_hat == doctest::Approx(1.0 - b2.theta_hat).epsilon(1e-15));
}

TEST_CASE("rank-deficient spectra are rejected for the standardized statistic") {
    // Three basis components make the pooled long-run operator exact rank 3,
    // so q = 5 asks for a direction with no variance.
    const Grid g = make_uniform_grid(21);
    const FunctionalSeries x = sim::simulate_lsfts(null_model(301), 400, g);
    const FunctionalSeries y = sim::simulate_lsfts(null_model(302), 400, g);
    CHECK_THROWS_AS(projected_tests(x, y, 0.5, 0.12, 2.5, 5, kEpan, kBartlett), InvalidArgument);
}

TEST_CASE("monte carlo p-value method reports the weighted statistic's tail") {
    const Grid g = make_uniform_grid(21);
    const FunctionalSeries x = sim::simulate_lsfts(null_model(401), 400, g);
    const FunctionalSeries y = sim::simulate_lsfts(null_model(402), 400, g);
    const TwoSampleResult res = projected_tests(x, y, 0.5, 0.12, 2.5, 2, kEpan, kBartlett, 1e-4,
                                                PValueMethod::mc_weighted, 20000, 5);
    CHECK(res.method == PValueMethod::mc_weighted);
    CHECK(res.p_value >= 0.0);
    CHECK(res.p_value <= 1.0);
    // Same seed, same p-value.
    const TwoSampleResult res2 = projected_tests(x, y, 0.5, 0.12, 2.5, 2, kEpan, kBartlett, 1e-4,
                                                 PValueMethod::mc_weighted, 20000, 5);
    CHECK(res.p_value == res2.p_value);
}

TEST_CASE("automatic order selection lands on the model rank") {
    const Grid g = make_uniform_grid(21);
    const FunctionalSeries x = sim::simulate_lsfts(null_model(501), 2000, g);
    const FunctionalSeries y = sim::simulate_lsfts(null_model(502), 2000, g);
    const double h = default_bandwidth_h(2000, BandwidthMode::inference);
    const double b = default_bandwidth_b(2000, h);
    const TwoSampleResult res = projected_tests(x, y, 0.5, h, b, -1, kEpan, kBartlett);
    CHECK(res.q_used == 3);
}

} // TEST_SUITE("two_sample")

#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lsfts/local_covariance.hpp"
#include "lsfts/longrun.hpp"
#include "lsfts/rng.hpp"

using namespace lsfts;
using lsfts::test::ar1_model;
using lsfts::test::constant_path;
using lsfts::test::median_of;
using lsfts::test::random_series;

namespace {

const SmoothingKernel kEpan{};
const LagWindowKernel kBartlett{};

sim::SimConfig iid_model(std::uint64_t seed) {
    sim::SimConfig cfg;
    cfg.components.push_back({constant_path(0.0), constant_path(1.0)});
    cfg.components.push_back({constant_path(0.0), constant_path(0.7)});
    cfg.components.push_back({constant_path(0.0), constant_path(0.45)});
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_SUITE("longrun") {

TEST_CASE("hand computation on a two-point grid") {
    // T = 3 curves on 2 grid points; lag-1 surface written out from the
    // defining sum: (1/Th) sum_{j=2}^{3} K1h(u - j/T) (x_j - m)(s1)(x_{j-1} - m)(s2).
    const Grid g = make_uniform_grid(2);
    Eigen::MatrixXd values(3, 2);
    values << 1.0, -2.0,
              0.5,  1.5,
             -1.0,  0.25;
    const FunctionalSeries x = make_series(values, g);
    const double u = 0.6, h = 0.5;
    const long T = 3;

    const auto k1h = [&](long t) {
        return k1_eval(kEpan, (u - static_cast<double>(t) / T) / h) / (T * h);
    };
    Eigen::Vector2d m = Eigen::Vector2d::Zero();
    for (long t = 1; t <= T; ++t) m += k1h(t) * values.row(t - 1).transpose();

    Eigen::Matrix2d expected;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double acc = 0.0;
            for (long t = 2; t <= T; ++t)
                acc += k1h(t) * (values(t - 1, i) - m(i)) * (values(t - 2, j) - m(j));
            expected(i, j) = acc;
        }

    const LocalCovariance got = local_autocov(x, u, h, kEpan, 1);
    CHECK((got.kernel - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("autocovariance surfaces of white noise average to zero") {
    const Grid g = make_uniform_grid(15);
    const long T = 2000;
    const double h = default_bandwidth_h(T, BandwidthMode::inference);
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(15, 15);
    const int reps = 25;
    for (int rep = 0; rep < reps; ++rep) {
        const FunctionalSeries x = sim::simulate_lsfts(iid_model(split_seed(88, rep)), T, g);
        avg += local_autocov(x, 0.5, h, kEpan, 1).kernel;
    }
    avg /= reps;
    CHECK(avg.cwiseAbs().maxCoeff() < 5.0 / std::sqrt(T * h));
}

TEST_CASE("maximal lag keeps a single term") {
    const Grid g = make_uniform_grid(5);
    const FunctionalSeries x = random_series(3, 5, 42);
    const double u = 0.9, h = 1.0;
    const LocalCovariance got = local_autocov(x, u, h, kEpan, 2);

    const double w = k1_eval(kEpan, (u - 1.0) / h) / (3.0 * h);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(5);
    for (long t = 1; t <= 3; ++t)
        m += k1_eval(kEpan, (u - t / 3.0) / h) / (3.0 * h) * x.values.row(t - 1).transpose();
    const Eigen::MatrixXd expected = w * (x.values.row(2).transpose() - m) *
                                     (x.values.row(0).transpose() - m).transpose();
    CHECK((got.kernel - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("lag bounds are validated") {
    const FunctionalSeries x = random_series(10, 5, 1);
    CHECK_THROWS_AS(local_autocov(x, 0.5, 0.3, kEpan, 0), InvalidArgument);
    CHECK_THROWS_AS(local_autocov(x, 0.5, 0.3, kEpan, 10), InvalidArgument);
    CHECK_THROWS_AS(longrun_cov(x, 0.5, 0.3, 0.0, kEpan, kBartlett), InvalidArgument);
}

TEST_CASE("long-run kernel is exactly symmetric") {
    const FunctionalSeries x = random_series(300, 17, 7);
    const LocalCovariance c = longrun_cov(x, 0.5, 0.1, 3.0, kEpan, kBartlett);
    CHECK((c.kernel - c.kernel.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a sub-unit lag bandwidth reduces to the centered covariance") {
    const FunctionalSeries x = random_series(200, 13, 8);
    const LocalCovariance lr = longrun_cov(x, 0.5, 0.12, 0.7, kEpan, kBartlett);
    const LocalCovariance c0 = local_cov(x, 0.5, 0.12, kEpan, /*center=*/true);
    CHECK((lr.kernel - c0.kernel).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("iid curves recover their covariance kernel") {
    const Grid g = make_uniform_grid(21);
    const long T = 4000;
    const double h = default_bandwidth_h(T, BandwidthMode::inference);
    const double b = default_bandwidth_b(T, h);
    std::vector<double> rel_errors;
    for (int rep = 0; rep < 9; ++rep) {
        const sim::SimConfig cfg = iid_model(split_seed(3030, rep));
        const FunctionalSeries x = sim::simulate_lsfts(cfg, T, g);
        const LocalCovariance chat = longrun_cov(x, 0.5, h, b, kEpan, kBartlett);
        const LocalCovariance c = sim::true_longrun_cov(cfg, 0.5, g);
        const Eigen::MatrixXd diff = chat.kernel - c.kernel;
        const Eigen::VectorXd& w = g.weights;
        const double num = (w.asDiagonal() * diff.cwiseProduct(diff) * w.asDiagonal()).sum();
        const double den =
            (w.asDiagonal() * c.kernel.cwiseProduct(c.kernel) * w.asDiagonal()).sum();
        rel_errors.push_back(std::sqrt(num / den));
    }
    CHECK(median_of(rel_errors) < 0.25);
}

TEST_CASE("integrated squared error shrinks with the sample size") {
    const Grid g = make_uniform_grid(21);
    std::vector<double> small_errs, large_errs;
    for (int rep = 0; rep < 15; ++rep) {
        for (long T : {1000L, 4000L}) {
            const sim::SimConfig cfg =
                lsfts::test::rank3_model(split_seed(919, static_cast<std::uint64_t>(T + rep)));
            const FunctionalSeries x = sim::simulate_lsfts(cfg, T, g);
            const double h = default_bandwidth_h(T, BandwidthMode::inference);
            const double b = default_bandwidth_b(T, h);
            const LocalCovariance chat = longrun_cov(x, 0.5, h, b, kEpan, kBartlett);
            const Eigen::MatrixXd diff = chat.kernel - sim::true_longrun_cov(cfg, 0.5, g).kernel;
            const Eigen::VectorXd& w = g.weights;
            const double err =
                (w.asDiagonal() * diff.cwiseProduct(diff) * w.asDiagonal()).sum();
            (T == 1000 ? small_errs : large_errs).push_back(err);
        }
    }
    CHECK(median_of(large_errs) < median_of(small_errs));
}

TEST_CASE("quadratic form along a direction") {
    const Grid g = make_uniform_grid(41);
    const Eigen::VectorXd phi = sim::fourier_basis(2, g);
    const LocalCovariance rank1{phi * phi.transpose(), g, 0.5, 0.1};
    CHECK(longrun_direction_value(rank1, phi) == doctest::Approx(1.0).epsilon(1e-10));

    const LocalCovariance zero{Eigen::MatrixXd::Zero(41, 41), g, 0.5, 0.1};
    CHECK(longrun_direction_value(zero, phi) == 0.0);
}

TEST_CASE("AR(1) long-run variance matches the closed form") {
    const Grid g = make_uniform_grid(31);
    const sim::SimConfig cfg = ar1_model(constant_path(0.5), constant_path(1.0), 11);
    const Eigen::VectorXd phi = sim::fourier_basis(1, g);

    // sigma^2 / (1-a)^2 = 1 / 0.25 = 4 on the analytic kernel.
    CHECK(longrun_direction_value(sim::true_longrun_cov(cfg, 0.5, g), phi) ==
          doctest::Approx(4.0).epsilon(1e-10));

    // The estimated kernel gets close at a large sample size.
    const long T = 8000;
    const double h = default_bandwidth_h(T, BandwidthMode::inference);
    const double b = default_bandwidth_b(T, h);
    const FunctionalSeries x = sim::simulate_lsfts(cfg, T, g);
    const LocalCovariance chat = longrun_cov(x, 0.5, h, b, kEpan, kBartlett);
    CHECK(longrun_direction_value(chat, phi) == doctest::Approx(4.0).epsilon(0.3));
}

} // TEST_SUITE("longrun")

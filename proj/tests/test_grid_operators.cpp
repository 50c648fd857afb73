#include <doctest.h>

#include <numbers>
#include <random>

#include "helpers.hpp"
#include "lsfts/operators.hpp"

using namespace lsfts;

namespace {

Eigen::VectorXd fourier(int k, const Grid& g) { return sim::fourier_basis(k, g); }

LocalCovariance kernel_on(const Grid& g, Eigen::MatrixXd k) {
    return LocalCovariance{std::move(k), g, 0.5, 0.1};
}

LocalCovariance random_psd(const Grid& g, std::uint64_t seed, int rank = 5) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.1, 2.0);
    const Eigen::Index n = g.size();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < rank; ++r) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
        k += unif(rng) * v * v.transpose();
    }
    return kernel_on(g, std::move(k));
}

} // namespace

TEST_SUITE("grid") {

TEST_CASE("uniform grid endpoints and trapezoid weights") {
    const Grid g2 = make_uniform_grid(2);
    CHECK(g2.points(0) == 0.0);
    CHECK(g2.points(1) == 1.0);
    CHECK(g2.weights(0) == doctest::Approx(0.5).epsilon(0.0));
    CHECK(g2.weights(1) == doctest::Approx(0.5).epsilon(0.0));

    const Grid g3 = make_uniform_grid(3);
    CHECK(g3.weights(0) == doctest::Approx(0.25));
    CHECK(g3.weights(1) == doctest::Approx(0.5));
    CHECK(g3.weights(2) == doctest::Approx(0.25));

    const Grid g101 = make_uniform_grid(101);
    CHECK(std::abs(g101.weights.sum() - 1.0) < 1e-12);
}

TEST_CASE("grid rejects bad sizes") {
    CHECK_THROWS_AS(make_uniform_grid(1), InvalidArgument);
    CHECK_THROWS_AS(make_uniform_grid(10, 2), InvalidArgument);
}

TEST_CASE("inner product on constants and linears is quadrature exact") {
    const Grid g = make_uniform_grid(101);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.size());
    CHECK(std::abs(inner_product(ones, ones, g) - 1.0) < 1e-12);
    CHECK(std::abs(inner_product(ones, g.points, g) - 0.5) < 1e-12);
}

TEST_CASE("inner product of the unit sine mode") {
    const Grid g = make_uniform_grid(201);
    const Eigen::VectorXd f = fourier(3, g); // sqrt(2) sin(2 pi s)
    CHECK(inner_product(f, f, g) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("inner product rejects mismatched lengths") {
    const Grid g = make_uniform_grid(11);
    CHECK_THROWS_AS(inner_product(Eigen::VectorXd::Zero(7), Eigen::VectorXd::Zero(11), g),
                    InvalidArgument);
}

TEST_CASE("l2 norm on simple curves") {
    const Grid g = make_uniform_grid(101);
    CHECK(l2_norm(Eigen::VectorXd::Zero(g.size()), g) == 0.0);
    CHECK(l2_norm(Eigen::VectorXd::Constant(g.size(), 2.0), g) == doctest::Approx(2.0));
    CHECK(l2_norm(g.points, g) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));
}

TEST_CASE("quadrature exactness for random polynomials of degree one") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int rep = 0; rep < 20; ++rep) {
        const Grid g = make_uniform_grid(3 + static_cast<int>(30 * std::abs(unif(rng))));
        const double a = unif(rng), b = unif(rng);
        const Eigen::VectorXd f = a * Eigen::VectorXd::Ones(g.size()) + b * g.points;
        const double expect = a + b / 2.0;
        CHECK(inner_product(f, Eigen::VectorXd::Ones(g.size()), g) ==
              doctest::Approx(expect).epsilon(1e-12));
    }
}

} // TEST_SUITE("grid")

TEST_SUITE("operators") {

TEST_CASE("rank-1 kernel has a single unit eigenvalue along its factor") {
    const Grid g = make_uniform_grid(101);
    const Eigen::VectorXd phi = fourier(2, g); // unit quadrature norm
    const LocalCovariance c = kernel_on(g, phi * phi.transpose());

    const EigenSystem es = operator_eigh(c, 3);
    CHECK(es.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(es.eigenvalues(1)) < 1e-10);
    const double overlap = std::abs(inner_product(es.eigenfunctions.col(0), phi, g));
    CHECK(overlap == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("zero kernel has an all-zero spectrum") {
    const Grid g = make_uniform_grid(21);
    const EigenSystem es = operator_eigh(kernel_on(g, Eigen::MatrixXd::Zero(21, 21)), 21);
    CHECK(es.eigenvalues.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("kernel built from a known two-mode spectrum is recovered") {
    const Grid g = make_uniform_grid(201);
    const Eigen::VectorXd p1 = fourier(1, g), p2 = fourier(2, g);
    const LocalCovariance c =
        kernel_on(g, 2.0 * p1 * p1.transpose() + 0.5 * p2 * p2.transpose());

    const EigenSystem es = operator_eigh(c, 2);
    CHECK(es.eigenvalues(0) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(es.eigenvalues(1) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("eigenfunctions are quadrature orthonormal") {
    const Grid g = make_uniform_grid(41);
    const EigenSystem es = operator_eigh(random_psd(g, 5), 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j <= i; ++j) {
            const double ip = inner_product(es.eigenfunctions.col(i), es.eigenfunctions.col(j), g);
            CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-8);
        }
}

TEST_CASE("full eigensystem reconstructs the kernel") {
    const Grid g = make_uniform_grid(31);
    const LocalCovariance c = random_psd(g, 17);
    const EigenSystem es = operator_eigh(c, static_cast<int>(g.size()));

    Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(g.size(), g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j)
        rebuilt += es.eigenvalues(j) * es.eigenfunctions.col(j) * es.eigenfunctions.col(j).transpose();
    const double rel = (rebuilt - c.kernel).norm() / c.kernel.norm();
    CHECK(rel < 1e-8);
}

TEST_CASE("operator_eigh validates its inputs") {
    const Grid g = make_uniform_grid(11);
    const LocalCovariance c = random_psd(g, 3);
    CHECK_THROWS_AS(operator_eigh(c, 0), InvalidArgument);
    CHECK_THROWS_AS(operator_eigh(c, 12), InvalidArgument);

    LocalCovariance bad = c;
    bad.kernel(3, 4) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(operator_eigh(bad, 2), NumericError);

    LocalCovariance asym = c;
    asym.kernel(2, 7) += 1.0;
    CHECK_THROWS_AS(operator_eigh(asym, 2), InvalidArgument);
}

TEST_CASE("operator norm of a difference") {
    const Grid g = make_uniform_grid(61);
    const LocalCovariance c1 = random_psd(g, 23);
    CHECK(operator_norm_bound(c1, c1) == 0.0);

    const Eigen::VectorXd phi = fourier(4, g);
    LocalCovariance c2 = c1;
    c2.kernel += phi * phi.transpose();
    CHECK(operator_norm_bound(c2, c1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("operator norm against zero equals the top absolute eigenvalue") {
    const Grid g = make_uniform_grid(33);
    const LocalCovariance zero = kernel_on(g, Eigen::MatrixXd::Zero(33, 33));
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        LocalCovariance c = random_psd(g, seed, 4);
        c.kernel -= 0.7 * c.kernel.trace() / 33 * Eigen::MatrixXd::Identity(33, 33); // mix signs
        const EigenSystem es = operator_eigh(c, 33);
        CHECK(operator_norm_bound(c, zero) ==
              doctest::Approx(es.eigenvalues.cwiseAbs().maxCoeff()).epsilon(1e-10));
    }
}

TEST_CASE("spectral dominance for positive semidefinite kernels") {
    const Grid g = make_uniform_grid(27);
    const LocalCovariance zero = kernel_on(g, Eigen::MatrixXd::Zero(27, 27));
    for (std::uint64_t seed : {7u, 8u, 9u}) {
        const LocalCovariance c = random_psd(g, seed);
        const double top = operator_eigh(c, 1).eigenvalues(0);
        CHECK(std::abs(operator_norm_bound(c, zero) - top) < 1e-10);
    }
}

TEST_CASE("operator norm requires a shared grid") {
    const LocalCovariance a = random_psd(make_uniform_grid(21), 1);
    const LocalCovariance b = random_psd(make_uniform_grid(22), 1);
    CHECK_THROWS_AS(operator_norm_bound(a, b), InvalidArgument);
}

TEST_CASE("negative eigenvalue clipping flags the system") {
    const Grid g = make_uniform_grid(15);
    const Eigen::VectorXd phi = fourier(2, g);
    const LocalCovariance c = kernel_on(g, -0.5 * phi * phi.transpose());
    EigenSystem es = operator_eigh(c, 15);
    CHECK(es.eigenvalues(14) < -0.4);
    CHECK(clip_negative_eigenvalues(es));
    CHECK(es.clipped);
    CHECK(es.eigenvalues.minCoeff() == 0.0);
}

} // TEST_SUITE("operators")

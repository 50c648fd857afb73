#pragma once

#include <random>

#include "lsfts/series.hpp"
#include "lsfts/simulate.hpp"

namespace lsfts::test {

inline FunctionalSeries random_series(long T, int n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    Eigen::MatrixXd values(T, n);
    for (long t = 0; t < T; ++t)
        for (int i = 0; i < n; ++i) values(t, i) = normal(rng);
    return make_series(std::move(values), make_uniform_grid(n));
}

inline FunctionalSeries constant_series(long T, const Eigen::VectorXd& curve, const Grid& grid) {
    Eigen::MatrixXd values(T, curve.size());
    values.rowwise() = curve.transpose();
    return make_series(std::move(values), grid);
}

inline sim::CoefPath constant_path(double c) {
    sim::CoefPath p;
    p.kind = sim::CoefPath::Kind::constant;
    p.c0 = c;
    return p;
}

inline sim::CoefPath linear_path(double c0, double c1) {
    sim::CoefPath p;
    p.kind = sim::CoefPath::Kind::linear;
    p.c0 = c0;
    p.c1 = c1;
    return p;
}

/// Single tvAR(1) component on the first basis function.
inline sim::SimConfig ar1_model(const sim::CoefPath& a, const sim::CoefPath& sigma,
                                std::uint64_t seed) {
    sim::SimConfig cfg;
    cfg.components.push_back({a, sigma});
    cfg.seed = seed;
    return cfg;
}

/// Three-component model matching the rank3 entry of the bench manifest.
inline sim::SimConfig rank3_model(std::uint64_t seed) {
    sim::SimConfig cfg;
    cfg.components.push_back({linear_path(0.1, 0.2), linear_path(1.0, 0.25)});
    cfg.components.push_back({constant_path(0.15), constant_path(0.7)});
    cfg.components.push_back({constant_path(0.1), constant_path(0.45)});
    cfg.seed = seed;
    return cfg;
}

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace lsfts::test

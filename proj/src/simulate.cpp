#include "lsfts/simulate.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>

#include "lsfts/reference.hpp"
#include "lsfts/rng.hpp"

namespace lsfts::sim {

namespace {

constexpr int kBurnIn = 500;
constexpr int kProbePoints = 2001;
constexpr double kMaxAr = 0.99;

void validate_config(const SimConfig& cfg) {
    if (cfg.components.empty())
        throw InvalidArgument("simulate: the model needs at least one component");
    for (std::size_t k = 0; k < cfg.components.size(); ++k) {
        const ComponentModel& comp = cfg.components[k];
        for (int i = 0; i < kProbePoints; ++i) {
            const double u = static_cast<double>(i) / (kProbePoints - 1);
            if (std::abs(comp.a(u)) >= kMaxAr)
                throw InvalidArgument("simulate: component " + std::to_string(k + 1) +
                                      " has |a(u)| >= " + std::to_string(kMaxAr) + " at u=" +
                                      std::to_string(u) + "; the recursion is not stable");
            if (!(comp.sigma(u) >= 0.0))
                throw InvalidArgument("simulate: component " + std::to_string(k + 1) +
                                      " has a negative innovation scale at u=" +
                                      std::to_string(u));
        }
    }
    for (const MeanTerm& term : cfg.mean)
        if (term.component < 1)
            throw InvalidArgument("simulate: mean terms use 1-based basis components");
}

/// Coefficient paths for one component, driven either along t/T or frozen at
/// a fixed u; shared by the locally stationary and companion simulators so
/// both consume innovations in the same order.
Eigen::VectorXd simulate_component(const ComponentModel& comp, long T, double frozen_u,
                                   bool frozen, std::uint64_t stream_seed) {
    NormalSampler normal(stream_seed);
    const double u0 = frozen ? frozen_u : 0.0;

    double xi = 0.0;
    for (int i = 0; i < kBurnIn; ++i) xi = comp.a(u0) * xi + comp.sigma(u0) * normal();

    Eigen::VectorXd out(T);
    for (long t = 1; t <= T; ++t) {
        const double u = frozen ? frozen_u : static_cast<double>(t) / T;
        xi = comp.a(u) * xi + comp.sigma(u) * normal();
        out(t - 1) = xi;
    }
    return out;
}

FunctionalSeries assemble(const SimConfig& cfg, long T, const Grid& grid, bool frozen,
                          double frozen_u) {
    validate_config(cfg);
    if (T < 2) throw InvalidArgument("simulate: need T >= 2");

    const int K = static_cast<int>(cfg.components.size());
    Eigen::MatrixXd scores(T, K);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < K; ++k)
        scores.col(k) = simulate_component(cfg.components[k], T, frozen_u, frozen,
                                           split_seed(cfg.seed, static_cast<std::uint64_t>(k)));

    Eigen::MatrixXd basis(grid.size(), K);
    for (int k = 0; k < K; ++k) basis.col(k) = fourier_basis(k + 1, grid);

    Eigen::MatrixXd values = scores * basis.transpose();
    if (!cfg.mean.empty()) {
        for (long t = 1; t <= T; ++t) {
            const double u = frozen ? frozen_u : static_cast<double>(t) / T;
            values.row(t - 1) += mean_curve(cfg, u, grid).transpose();
        }
    }
    return FunctionalSeries{std::move(values), grid};
}

void require_mean_zero(const SimConfig& cfg, const char* where) {
    if (!cfg.mean.empty())
        throw InvalidArgument(std::string(where) +
                              ": the analytic oracle is undefined for nonzero-mean models");
}

OracleSpectrum sorted_spectrum(std::vector<double> values) {
    OracleSpectrum spec;
    std::vector<int> order(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[static_cast<std::size_t>(a)] >
                                                values[static_cast<std::size_t>(b)]; });
    spec.values.resize(static_cast<Eigen::Index>(values.size()));
    spec.component.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        spec.values(static_cast<Eigen::Index>(i)) = values[static_cast<std::size_t>(order[i])];
        spec.component[i] = order[i] + 1;
    }
    return spec;
}

LocalCovariance rank_kernel(const SimConfig& cfg, double u, const Grid& grid,
                            double (*eigenvalue)(double a, double sigma)) {
    const Eigen::Index n = grid.size();
    LocalCovariance cov;
    cov.kernel = Eigen::MatrixXd::Zero(n, n);
    cov.grid = grid;
    cov.u = u;
    for (std::size_t k = 0; k < cfg.components.size(); ++k) {
        const double lambda = eigenvalue(cfg.components[k].a(u), cfg.components[k].sigma(u));
        const Eigen::VectorXd phi = fourier_basis(static_cast<int>(k) + 1, grid);
        cov.kernel += lambda * (phi * phi.transpose());
    }
    return cov;
}

double local_eigenvalue(double a, double sigma) { return sigma * sigma / (1.0 - a * a); }
double longrun_eigenvalue(double a, double sigma) { return sigma * sigma / ((1.0 - a) * (1.0 - a)); }

} // namespace

double CoefPath::operator()(double u) const {
    switch (kind) {
        case Kind::constant: return c0;
        case Kind::linear: return c0 + c1 * u;
        case Kind::sine:
            return c0 + c1 * std::sin(2.0 * std::numbers::pi * freq * u + phase);
    }
    return c0;
}

Eigen::VectorXd fourier_basis(int k, const Grid& grid) {
    if (k < 1) throw InvalidArgument("fourier_basis: components are 1-based");
    const Eigen::Index n = grid.size();
    Eigen::VectorXd phi(n);
    if (k == 1) {
        phi.setOnes();
        return phi;
    }
    const int m = k / 2;
    const double root2 = std::numbers::sqrt2;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double arg = 2.0 * std::numbers::pi * m * grid.points(i);
        phi(i) = root2 * (k % 2 == 0 ? std::cos(arg) : std::sin(arg));
    }
    return phi;
}

Eigen::VectorXd mean_curve(const SimConfig& cfg, double u, const Grid& grid) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(grid.size());
    for (const MeanTerm& term : cfg.mean)
        m += term.path(u) * fourier_basis(term.component, grid);
    return m;
}

FunctionalSeries simulate_lsfts(const SimConfig& cfg, long T, const Grid& grid) {
    return assemble(cfg, T, grid, /*frozen=*/false, 0.0);
}

FunctionalSeries stationary_approx(const SimConfig& cfg, double u, long T, const Grid& grid) {
    if (u < 0.0 || u > 1.0) throw InvalidArgument("stationary_approx: u must lie in [0, 1]");
    return assemble(cfg, T, grid, /*frozen=*/true, u);
}

LocalCovariance true_local_covariance(const SimConfig& cfg, double u, const Grid& grid) {
    require_mean_zero(cfg, "true_local_covariance");
    validate_config(cfg);
    return rank_kernel(cfg, u, grid, local_eigenvalue);
}

LocalCovariance true_longrun_cov(const SimConfig& cfg, double u, const Grid& grid) {
    require_mean_zero(cfg, "true_longrun_cov");
    validate_config(cfg);
    return rank_kernel(cfg, u, grid, longrun_eigenvalue);
}

OracleSpectrum true_local_spectrum(const SimConfig& cfg, double u) {
    validate_config(cfg);
    std::vector<double> values;
    for (const ComponentModel& comp : cfg.components)
        values.push_back(local_eigenvalue(comp.a(u), comp.sigma(u)));
    return sorted_spectrum(std::move(values));
}

OracleSpectrum true_longrun_spectrum(const SimConfig& cfg, double u) {
    validate_config(cfg);
    std::vector<double> values;
    for (const ComponentModel& comp : cfg.components)
        values.push_back(longrun_eigenvalue(comp.a(u), comp.sigma(u)));
    return sorted_spectrum(std::move(values));
}

LocalCovariance brute_force_local_cov(const FunctionalSeries& series, double u, double h,
                                      const SmoothingKernel& kernel, bool center) {
    if (series.length() > 50 || series.grid.size() > 16)
        throw InvalidArgument("brute_force_local_cov: reference path is capped at T <= 50, n <= 16");
    return reference::local_cov(series, u, h, kernel, center);
}

namespace {

CoefPath path_from_json(const nlohmann::json& j) {
    CoefPath p;
    const std::string kind = j.value("kind", "constant");
    if (kind == "constant") p.kind = CoefPath::Kind::constant;
    else if (kind == "linear") p.kind = CoefPath::Kind::linear;
    else if (kind == "sine") p.kind = CoefPath::Kind::sine;
    else throw DataError("SimConfig: unknown path kind '" + kind + "'");
    p.c0 = j.value("c0", 0.0);
    p.c1 = j.value("c1", 0.0);
    p.freq = j.value("freq", 1.0);
    p.phase = j.value("phase", 0.0);
    return p;
}

nlohmann::json path_to_json(const CoefPath& p) {
    nlohmann::json j;
    switch (p.kind) {
        case CoefPath::Kind::constant: j["kind"] = "constant"; break;
        case CoefPath::Kind::linear: j["kind"] = "linear"; break;
        case CoefPath::Kind::sine: j["kind"] = "sine"; break;
    }
    j["c0"] = p.c0;
    j["c1"] = p.c1;
    if (p.kind == CoefPath::Kind::sine) {
        j["freq"] = p.freq;
        j["phase"] = p.phase;
    }
    return j;
}

} // namespace

SimConfig config_from_json(const nlohmann::json& j) {
    SimConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t{1});
    if (!j.contains("components") || !j["components"].is_array() || j["components"].empty())
        throw DataError("SimConfig: 'components' must be a non-empty array");
    for (const auto& c : j["components"]) {
        ComponentModel comp;
        comp.a = path_from_json(c.at("a"));
        comp.sigma = path_from_json(c.at("sigma"));
        cfg.components.push_back(comp);
    }
    if (j.contains("mean")) {
        for (const auto& m : j["mean"]) {
            MeanTerm term;
            term.component = m.at("component").get<int>();
            term.path = path_from_json(m.at("path"));
            cfg.mean.push_back(term);
        }
    }
    validate_config(cfg);
    return cfg;
}

nlohmann::json config_to_json(const SimConfig& cfg) {
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["components"] = nlohmann::json::array();
    for (const ComponentModel& c : cfg.components)
        j["components"].push_back({{"a", path_to_json(c.a)}, {"sigma", path_to_json(c.sigma)}});
    if (!cfg.mean.empty()) {
        j["mean"] = nlohmann::json::array();
        for (const MeanTerm& m : cfg.mean)
            j["mean"].push_back({{"component", m.component}, {"path", path_to_json(m.path)}});
    }
    return j;
}

} // namespace lsfts::sim

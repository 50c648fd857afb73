#include "lsfts/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "embedded_manifest.hpp"
#include "lsfts/csv.hpp"
#include "lsfts/local_covariance.hpp"
#include "lsfts/local_mean.hpp"
#include "lsfts/longrun.hpp"
#include "lsfts/prediction.hpp"
#include "lsfts/reference.hpp"
#include "lsfts/rng.hpp"
#include "lsfts/simulate.hpp"
#include "lsfts/two_sample.hpp"

namespace lsfts::bench {

namespace {

using nlohmann::json;

sim::SimConfig model(const json& manifest, const std::string& name, std::uint64_t seed) {
    const auto& models = manifest.at("models");
    if (!models.contains(name))
        throw InvalidArgument("experiments: unknown model '" + name + "'");
    sim::SimConfig cfg = sim::config_from_json(models.at(name));
    cfg.seed = seed;
    return cfg;
}

Grid experiment_grid(const json& manifest) {
    return make_uniform_grid(manifest.value("grid_n", 51));
}

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid) - 1, v.end());
        m = 0.5 * (m + v[mid - 1]);
    }
    return m;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_distance_to_normal(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = standard_normal_cdf(sample[i]);
        ks = std::max(ks, std::max(cdf - static_cast<double>(i) / n,
                                   static_cast<double>(i + 1) / n - cdf));
    }
    return ks;
}

/// Weighted squared L2 distance of two kernels, the quadrature form of the
/// double integral of the squared difference.
double kernel_l2_sq(const LocalCovariance& a, const LocalCovariance& b) {
    const Eigen::MatrixXd diff = a.kernel - b.kernel;
    const Eigen::VectorXd& w = a.grid.weights;
    return (w.asDiagonal() * diff.cwiseProduct(diff) * w.asDiagonal()).sum();
}

// ---------------------------------------------------------------------------
// oracle-equivalence: optimized kernels against the serial triple-loop
// references on small random inputs.
// ---------------------------------------------------------------------------
Table run_oracle_equivalence(const json& cfg) {
    const int instances = cfg.at("instances").get<int>();
    const long T = cfg.at("T").get<long>();
    const int n = cfg.at("n").get<int>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const Grid grid = make_uniform_grid(n);
    const SmoothingKernel k1{};
    const LagWindowKernel k2{};

    Table table;
    table.columns = {"instance", "local_cov", "local_autocov", "longrun_cov", "prediction_cov"};
    table.rows.resize(static_cast<std::size_t>(instances));

#pragma omp parallel for schedule(dynamic)
    for (int inst = 0; inst < instances; ++inst) {
        std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(inst)));
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> unif;

        Eigen::MatrixXd values(T, n);
        for (long t = 0; t < T; ++t)
            for (int i = 0; i < n; ++i) values(t, i) = normal(rng);
        const FunctionalSeries series = make_series(values, grid);

        const double u = 0.25 + 0.5 * unif(rng);
        const double h = 0.15 + 0.2 * unif(rng);
        const bool center = unif(rng) < 0.5;
        const long lag = 1 + static_cast<long>(unif(rng) * 4.0);
        const double b = 0.8 + 2.2 * unif(rng);
        const long T_nominal = T + 3 + static_cast<long>(unif(rng) * 5.0);

        const double d_cov =
            (local_cov(series, u, h, k1, center).kernel -
             reference::local_cov(series, u, h, k1, center).kernel).cwiseAbs().maxCoeff();
        const double d_auto =
            (local_autocov(series, u, h, k1, lag).kernel -
             reference::local_autocov(series, u, h, k1, lag).kernel).cwiseAbs().maxCoeff();
        const double d_lr =
            (longrun_cov(series, u, h, b, k1, k2).kernel -
             reference::longrun_cov(series, u, h, b, k1, k2).kernel).cwiseAbs().maxCoeff();
        const double d_pred =
            (prediction_cov(series, T_nominal, u, h, k1, center).kernel -
             reference::prediction_cov(series, T_nominal, u, h, k1, center).kernel)
                .cwiseAbs().maxCoeff();

        table.rows[static_cast<std::size_t>(inst)] = {static_cast<double>(inst), d_cov, d_auto,
                                                      d_lr, d_pred};
    }
    return table;
}

// ---------------------------------------------------------------------------
// eigen-perturbation: Weyl-type eigenvalue bound and the gap-weighted
// eigenfunction bound on random rank-4 operators under random perturbations.
// Columns report the excess over the bound (<= 0 means the bound holds).
// ---------------------------------------------------------------------------
Table run_eigen_perturbation(const json& cfg) {
    const int pairs = cfg.at("pairs").get<int>();
    const int n = cfg.at("n").get<int>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const Grid grid = make_uniform_grid(n);
    const int rank = 4;
    const Eigen::Vector4d lambdas(4.0, 2.5, 1.2, 0.4);

    Table table;
    table.columns = {"pair", "weyl_excess", "eigenfunction_excess"};
    table.rows.resize(static_cast<std::size_t>(pairs));

#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < pairs; ++p) {
        std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(p)));
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> unif(-1.0, 1.0);

        // Random quadrature-orthonormal system via Gram-Schmidt.
        Eigen::MatrixXd basis(n, rank);
        for (int j = 0; j < rank; ++j) {
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v(i) = normal(rng);
            for (int l = 0; l < j; ++l)
                v -= inner_product(v, basis.col(l), grid) * basis.col(l);
            basis.col(j) = v / l2_norm(v, grid);
        }

        LocalCovariance ref;
        ref.grid = grid;
        ref.kernel = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j < rank; ++j)
            ref.kernel += lambdas(j) * basis.col(j) * basis.col(j).transpose();

        LocalCovariance perturbed = ref;
        for (int l = 0; l < 3; ++l) {
            Eigen::VectorXd g(n);
            for (int i = 0; i < n; ++i) g(i) = normal(rng);
            g /= l2_norm(g, grid);
            perturbed.kernel += 0.08 * unif(rng) * g * g.transpose();
        }

        const double dist = operator_norm_bound(perturbed, ref);
        const EigenSystem e1 = operator_eigh(perturbed, n);
        const EigenSystem e2 = operator_eigh(ref, n);

        double weyl_excess = -1.0;
        for (int j = 0; j < n; ++j)
            weyl_excess = std::max(weyl_excess,
                                   std::abs(e1.eigenvalues(j) - e2.eigenvalues(j)) - dist);

        // Spectral gaps of the reference; its trailing eigenvalue is 0.
        double eigf_excess = -1.0;
        for (int j = 0; j < rank; ++j) {
            const double upper = (j == 0) ? lambdas(0) - lambdas(1)
                                          : std::min(lambdas(j - 1) - lambdas(j),
                                                     lambdas(j) - (j + 1 < rank ? lambdas(j + 1) : 0.0));
            if (upper < 1e-8) continue; // degenerate gap, bound not applicable
            const Eigen::VectorXd aligned =
                align_sign(e1.eigenfunctions.col(j), basis.col(j), grid).curve;
            const double err = l2_norm(aligned - basis.col(j), grid);
            eigf_excess = std::max(eigf_excess, err - 2.0 * std::numbers::sqrt2 / upper * dist);
        }

        table.rows[static_cast<std::size_t>(p)] = {static_cast<double>(p), weyl_excess,
                                                   eigf_excess};
    }
    return table;
}

// ---------------------------------------------------------------------------
// eigen-rate: decay of the leading local FPCA eigenvalue error over a sample
// size ladder with the rate-optimal bandwidth.
// ---------------------------------------------------------------------------
Table run_eigen_rate(const json& cfg, const json& manifest) {
    const std::string model_name = cfg.at("model").get<std::string>();
    const double u = cfg.at("u").get<double>();
    const std::vector<long> ladder = cfg.at("T").get<std::vector<long>>();
    const int replicates = cfg.at("replicates").get<int>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const Grid grid = experiment_grid(manifest);
    const SmoothingKernel k1{};

    Table table;
    table.columns = {"T", "median_abs_eigenvalue_error"};

    std::uint64_t stream = 0;
    for (long T : ladder) {
        const double h = default_bandwidth_h(T, BandwidthMode::estimation);
        std::vector<double> errors(static_cast<std::size_t>(replicates));
        const std::uint64_t base = stream;

#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < replicates; ++r) {
            sim::SimConfig cfg_r = model(manifest, model_name,
                                         split_seed(seed, base + static_cast<std::uint64_t>(r)));
            const FunctionalSeries x = sim::simulate_lsfts(cfg_r, T, grid);
            const LocalCovariance c = local_cov(x, u, h, k1, /*center=*/false);
            const double lambda_hat = local_fpca(c, 1).eigenvalues(0);
            const double lambda = sim::true_local_spectrum(cfg_r, u).values(0);
            errors[static_cast<std::size_t>(r)] = std::abs(lambda_hat - lambda);
        }
        stream += static_cast<std::uint64_t>(replicates);
        table.rows.push_back({static_cast<double>(T), median(std::move(errors))});
    }
    return table;
}

// ---------------------------------------------------------------------------
// clt: distribution of the standardized projected local mean against N(0,1),
// using the analytic long-run value of the projection direction.
// ---------------------------------------------------------------------------
Table run_clt(const json& cfg, const json& manifest) {
    const std::string model_name = cfg.at("model").get<std::string>();
    const double u = cfg.at("u").get<double>();
    const long T = cfg.at("T").get<long>();
    const int replicates = cfg.at("replicates").get<int>();
    const int direction_component = cfg.at("direction_component").get<int>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const Grid grid = experiment_grid(manifest);
    const SmoothingKernel k1{};
    const double h = default_bandwidth_h(T, BandwidthMode::inference);

    const Eigen::VectorXd direction = sim::fourier_basis(direction_component, grid);
    const sim::SimConfig base_cfg = model(manifest, model_name, 1);
    const double lr_value =
        longrun_direction_value(sim::true_longrun_cov(base_cfg, u, grid), direction);

    std::vector<double> stats(static_cast<std::size_t>(replicates));
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < replicates; ++r) {
        sim::SimConfig cfg_r = model(manifest, model_name,
                                     split_seed(seed, static_cast<std::uint64_t>(r)));
        const FunctionalSeries x = sim::simulate_lsfts(cfg_r, T, grid);
        stats[static_cast<std::size_t>(r)] = clt_standardize(x, u, h, k1, direction, lr_value);
    }

    const double n = static_cast<double>(replicates);
    double mean = 0.0;
    for (double s : stats) mean += s;
    mean /= n;
    double var = 0.0;
    for (double s : stats) var += (s - mean) * (s - mean);
    var /= (n - 1.0);

    Table table;
    table.columns = {"replicates", "mean", "variance", "ks_distance"};
    table.rows.push_back({n, mean, var, ks_distance_to_normal(stats)});
    return table;
}

// ---------------------------------------------------------------------------
// longrun-consistency: integrated squared error of the long-run kernel
// estimate against the analytic kernel over a sample size ladder.
// ---------------------------------------------------------------------------
Table run_longrun_consistency(const json& cfg, const json& manifest) {
    const std::string model_name = cfg.at("model").get<std::string>();
    const double u = cfg.at("u").get<double>();
    const std::vector<long> ladder = cfg.at("T").get<std::vector<long>>();
    const int replicates = cfg.at("replicates").get<int>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const Grid grid = experiment_grid(manifest);
    const SmoothingKernel k1{};
    const LagWindowKernel k2{};

    Table table;
    table.columns = {"T", "median_integrated_sq_error"};

    std::uint64_t stream = 0;
    for (long T : ladder) {
        const double h = default_bandwidth_h(T, BandwidthMode::inference);
        const double b = default_bandwidth_b(T, h);
        std::vector<double> errors(static_cast<std::size_t>(replicates));
        const std::uint64_t base = stream;

#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < replicates; ++r) {
            sim::SimConfig cfg_r = model(manifest, model_name,
                                         split_seed(seed, base + static_cast<std::uint64_t>(r)));
            const FunctionalSeries x = sim::simulate_lsfts(cfg_r, T, grid);
            const LocalCovariance chat = longrun_cov(x, u, h, b, k1, k2);
            errors[static_cast<std::size_t>(r)] =
                kernel_l2_sq(chat, sim::true_longrun_cov(cfg_r, u, grid));
        }
        stream += static_cast<std::uint64_t>(replicates);
        table.rows.push_back({static_cast<double>(T), median(std::move(errors))});
    }
    return table;
}

// ---------------------------------------------------------------------------
// two-sample-size / two-sample-power: rejection rate of the standardized
// projected test at the nominal level, under equal and shifted means.
// ---------------------------------------------------------------------------
Table run_two_sample(const json& cfg, const json& manifest, bool shifted) {
    const std::string null_name = cfg.at("model").get<std::string>();
    const std::string alt_name = shifted ? cfg.at("shift_model").get<std::string>() : null_name;
    const double u = cfg.at("u").get<double>();
    const long T1 = cfg.at("T1").get<long>();
    const long T2 = cfg.at("T2").get<long>();
    const int q = cfg.at("q").get<int>();
    const int replicates = cfg.at("replicates").get<int>();
    const double level = cfg.at("level").get<double>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const Grid grid = experiment_grid(manifest);
    const SmoothingKernel k1{};
    const LagWindowKernel k2{};
    const double h = default_bandwidth_h(std::min(T1, T2), BandwidthMode::inference);
    const double b = default_bandwidth_b(std::min(T1, T2), h);

    std::vector<int> reject(static_cast<std::size_t>(replicates));
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < replicates; ++r) {
        sim::SimConfig cx = model(manifest, null_name,
                                  split_seed(seed, 2 * static_cast<std::uint64_t>(r)));
        sim::SimConfig cy = model(manifest, alt_name,
                                  split_seed(seed, 2 * static_cast<std::uint64_t>(r) + 1));
        const FunctionalSeries x = sim::simulate_lsfts(cx, T1, grid);
        const FunctionalSeries y = sim::simulate_lsfts(cy, T2, grid);
        const TwoSampleResult res = projected_tests(x, y, u, h, b, q, k1, k2);
        reject[static_cast<std::size_t>(r)] = res.p_value < level ? 1 : 0;
    }

    int total = 0;
    for (int v : reject) total += v;

    Table table;
    table.columns = {"replicates", "rejections", "rejection_rate"};
    table.rows.push_back({static_cast<double>(replicates), static_cast<double>(total),
                          static_cast<double>(total) / replicates});
    return table;
}

// ---------------------------------------------------------------------------
// selector: distribution of the eigenvalue-ratio order estimate in a model
// whose long-run operator has exact rank 3.
// ---------------------------------------------------------------------------
Table run_selector(const json& cfg, const json& manifest) {
    const std::string model_name = cfg.at("model").get<std::string>();
    const double u = cfg.at("u").get<double>();
    const long T = cfg.at("T").get<long>();
    const int replicates = cfg.at("replicates").get<int>();
    const double eps0 = cfg.at("eps0").get<double>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const Grid grid = experiment_grid(manifest);
    const SmoothingKernel k1{};
    const LagWindowKernel k2{};
    const double h = default_bandwidth_h(T, BandwidthMode::inference);
    const double b = default_bandwidth_b(T, h);
    const int q_bar = static_cast<int>(std::min<Eigen::Index>(10, grid.size() - 1));

    std::vector<int> selected(static_cast<std::size_t>(replicates));
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < replicates; ++r) {
        sim::SimConfig cx = model(manifest, model_name,
                                  split_seed(seed, 2 * static_cast<std::uint64_t>(r)));
        sim::SimConfig cy = model(manifest, model_name,
                                  split_seed(seed, 2 * static_cast<std::uint64_t>(r) + 1));
        const FunctionalSeries x = sim::simulate_lsfts(cx, T, grid);
        const FunctionalSeries y = sim::simulate_lsfts(cy, T, grid);
        const LocalCovariance pooled = pooled_longrun(x, y, u, h, b, k1, k2);
        EigenSystem es = operator_eigh(pooled, static_cast<int>(grid.size()));
        clip_negative_eigenvalues(es);
        selected[static_cast<std::size_t>(r)] = select_q_ratio(es.eigenvalues, q_bar, eps0);
    }

    int hits = 0;
    for (int s : selected) hits += (s == 3) ? 1 : 0;

    Table table;
    table.columns = {"replicates", "rank3_selected", "fraction"};
    table.rows.push_back({static_cast<double>(replicates), static_cast<double>(hits),
                          static_cast<double>(hits) / replicates});
    return table;
}

// ---------------------------------------------------------------------------
// prediction: error of the k-step predictor against the truncated projection
// target built from the analytic eigenfunctions, over a sample size ladder.
// ---------------------------------------------------------------------------
Table run_prediction(const json& cfg, const json& manifest) {
    const std::string model_name = cfg.at("model").get<std::string>();
    const long k = cfg.at("k").get<long>();
    const int q = cfg.at("q").get<int>();
    const std::vector<long> ladder = cfg.at("T").get<std::vector<long>>();
    const int replicates = cfg.at("replicates").get<int>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const Grid grid = experiment_grid(manifest);
    const SmoothingKernel k1{};

    Table table;
    table.columns = {"T", "median_prediction_error"};

    std::uint64_t stream = 0;
    for (long T : ladder) {
        const long T1 = T - k - 1;
        const double u = static_cast<double>(T1) / static_cast<double>(T);
        const double h = default_bandwidth_h(T1, BandwidthMode::estimation);
        std::vector<double> errors(static_cast<std::size_t>(replicates));
        const std::uint64_t base = stream;

#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < replicates; ++r) {
            sim::SimConfig cfg_r = model(manifest, model_name,
                                         split_seed(seed, base + static_cast<std::uint64_t>(r)));
            const FunctionalSeries full = sim::simulate_lsfts(cfg_r, T, grid);
            const FunctionalSeries observed =
                make_series(full.values.topRows(T1), grid);
            const Eigen::VectorXd prediction =
                predict_k_step(observed, T, k, q, u, h, k1);

            // Truncated projection target: the future curve projected onto
            // the top-q analytic eigenfunctions at u.
            const sim::OracleSpectrum spectrum = sim::true_local_spectrum(cfg_r, u);
            const Eigen::VectorXd future = full.values.row(T1 + k - 1).transpose();
            Eigen::VectorXd target = Eigen::VectorXd::Zero(grid.size());
            for (int j = 0; j < q; ++j) {
                const Eigen::VectorXd phi =
                    sim::fourier_basis(spectrum.component[static_cast<std::size_t>(j)], grid);
                target += inner_product(future, phi, grid) * phi;
            }
            errors[static_cast<std::size_t>(r)] = l2_norm(prediction - target, grid);
        }
        stream += static_cast<std::uint64_t>(replicates);
        table.rows.push_back({static_cast<double>(T), median(std::move(errors))});
    }
    return table;
}

// ---------------------------------------------------------------------------
// riemann: deviation of the kernel weight sum from one, as a function of T at
// fixed bandwidth (the Riemann-sum term of the weight bias).
// ---------------------------------------------------------------------------
Table run_riemann(const json& cfg) {
    const std::vector<double> us = cfg.at("u").get<std::vector<double>>();
    const double h = cfg.at("h").get<double>();
    const std::vector<long> ladder = cfg.at("T").get<std::vector<long>>();
    const SmoothingKernel k1{};

    Table table;
    table.columns = {"u", "T", "abs_weight_sum_error"};
    for (double u : us)
        for (long T : ladder) {
            const LocalWeights lw = local_weights(u, T, h, k1, WeightMode::paper);
            table.rows.push_back({u, static_cast<double>(T), std::abs(lw.sum - 1.0)});
        }
    return table;
}

} // namespace

std::string Table::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << io::format_double(row[i]);
        out << '\n';
    }
    return out.str();
}

const json& default_manifest() {
    static const json manifest = json::parse(detail::kManifestJson);
    return manifest;
}

std::vector<std::string> experiment_names() {
    return {"oracle-equivalence", "eigen-perturbation", "eigen-rate",     "clt",
            "longrun-consistency", "two-sample-size",   "two-sample-power", "selector",
            "prediction",          "riemann"};
}

Table run_experiment(const std::string& name, const json& manifest) {
    const auto& experiments = manifest.at("experiments");
    if (!experiments.contains(name))
        throw InvalidArgument("experiments: unknown experiment '" + name +
                              "'; see `lsfts bench --list`");
    const json& cfg = experiments.at(name);

    if (name == "oracle-equivalence") return run_oracle_equivalence(cfg);
    if (name == "eigen-perturbation") return run_eigen_perturbation(cfg);
    if (name == "eigen-rate") return run_eigen_rate(cfg, manifest);
    if (name == "clt") return run_clt(cfg, manifest);
    if (name == "longrun-consistency") return run_longrun_consistency(cfg, manifest);
    if (name == "two-sample-size") return run_two_sample(cfg, manifest, /*shifted=*/false);
    if (name == "two-sample-power") return run_two_sample(cfg, manifest, /*shifted=*/true);
    if (name == "selector") return run_selector(cfg, manifest);
    if (name == "prediction") return run_prediction(cfg, manifest);
    if (name == "riemann") return run_riemann(cfg);
    throw InvalidArgument("experiments: '" + name + "' is declared but has no runner");
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidArgument("loglog_slope: need two same-length samples of size >= 2");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log10(x[i]);
        const double ly = std::log10(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace lsfts::bench

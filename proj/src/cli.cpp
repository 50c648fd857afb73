#include "lsfts/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lsfts/csv.hpp"
#include "lsfts/experiments.hpp"
#include "lsfts/local_covariance.hpp"
#include "lsfts/local_mean.hpp"
#include "lsfts/longrun.hpp"
#include "lsfts/prediction.hpp"
#include "lsfts/simulate.hpp"
#include "lsfts/two_sample.hpp"

namespace lsfts::cli {

namespace {

using nlohmann::json;

constexpr const char* kDefaultSimConfig = R"({
  "components": [
    { "a": { "kind": "linear", "c0": 0.1, "c1": 0.2 },
      "sigma": { "kind": "linear", "c0": 1.0, "c1": 0.25 } },
    { "a": { "kind": "constant", "c0": 0.15 },
      "sigma": { "kind": "constant", "c0": 0.7 } },
    { "a": { "kind": "constant", "c0": 0.1 },
      "sigma": { "kind": "constant", "c0": 0.45 } }
  ]
})";

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("LSFTS_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < omp_get_max_threads()) omp_set_num_threads(cap);
    }
#endif
}

SmoothingKernel parse_k1(const std::string& name) {
    if (name == "epanechnikov") return {SmoothingKernelId::epanechnikov, 1.0};
    if (name == "triangular") return {SmoothingKernelId::triangular, 1.0};
    if (name == "quartic") return {SmoothingKernelId::quartic, 1.0};
    throw InvalidArgument("unknown smoothing kernel '" + name + "'");
}

LagWindowKernel parse_k2(const std::string& name) {
    if (name == "bartlett") return {LagWindowId::bartlett, 1.0};
    if (name == "parzen") return {LagWindowId::parzen, 1.0};
    if (name == "truncated") return {LagWindowId::truncated, 1.0};
    throw InvalidArgument("unknown lag-window kernel '" + name + "'");
}

WeightMode parse_weights(const std::string& name) {
    if (name == "paper") return WeightMode::paper;
    if (name == "normalized") return WeightMode::normalized;
    throw InvalidArgument("unknown weight mode '" + name + "' (use paper|normalized)");
}

double resolve_h(double h, double h_scale, long T, BandwidthMode mode) {
    if (h > 0.0) return h;
    return h_scale * default_bandwidth_h(T, mode);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("'" + path + "': " + e.what());
    }
    return j;
}

struct CommonOpts {
    std::string k1 = "epanechnikov";
    std::string k2 = "bartlett";
    std::string weights = "paper";
    double h = 0.0; // 0 = use the mode default
    double b = 0.0;
    double h_scale = 1.0;
};

void add_kernel_flags(CLI::App* cmd, CommonOpts& opts, bool with_k2) {
    cmd->add_option("--k1", opts.k1, "Smoothing kernel: epanechnikov|triangular|quartic");
    if (with_k2)
        cmd->add_option("--k2", opts.k2, "Lag-window kernel: bartlett|parzen|truncated");
    cmd->add_option("--h", opts.h, "Smoothing bandwidth (default: mode-dependent power of T)");
    cmd->add_option("--h-scale", opts.h_scale,
                    "Multiplier on the default bandwidth when --h is not given");
    if (with_k2)
        cmd->add_option("--b", opts.b, "Lag-window bandwidth (default: (T*h)^(1/3))");
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Kernel estimation, prediction, and two-sample testing for locally "
                 "stationary functional time series"};
    app.require_subcommand(1);
    // --h is a bandwidth flag here, so help gets the long name only.
    app.set_help_flag("--help", "Print help and exit");
    const auto subcommand = [&app](const std::string& name, const std::string& desc) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        cmd->set_help_flag("--help", "Print help and exit");
        return cmd;
    };

    // --- simulate ---------------------------------------------------------
    auto* cmd_sim = subcommand("simulate", "Generate a series from a model config");
    long sim_T = 0;
    int sim_n = 101;
    std::uint64_t sim_seed = 1;
    std::string sim_config, sim_out;
    cmd_sim->add_option("--T", sim_T, "Number of curves")->required();
    cmd_sim->add_option("--n", sim_n, "Grid size");
    cmd_sim->add_option("--seed", sim_seed, "RNG seed");
    cmd_sim->add_option("--config", sim_config, "Model config JSON (default: built-in 3-component model)");
    cmd_sim->add_option("--out", sim_out, "Output series CSV")->required();

    // --- estimate-mean ----------------------------------------------------
    auto* cmd_mean = subcommand("estimate-mean", "Locally weighted mean curve at u");
    CommonOpts mean_opts;
    double mean_u = 0.5;
    std::string mean_in, mean_out;
    cmd_mean->add_option("--in", mean_in, "Input series CSV")->required();
    cmd_mean->add_option("--u", mean_u, "Rescaled time in [0,1]")->required();
    cmd_mean->add_option("--weights", mean_opts.weights, "Weight mode: paper|normalized");
    add_kernel_flags(cmd_mean, mean_opts, /*with_k2=*/false);
    cmd_mean->add_option("--out", mean_out, "Output curve CSV")->required();

    // --- fpca ---------------------------------------------------------------
    auto* cmd_fpca = subcommand("fpca", "Local FPCA at u");
    CommonOpts fpca_opts;
    double fpca_u = 0.5;
    int fpca_q = 0;
    bool fpca_center = true;
    std::string fpca_in, fpca_values_out, fpca_functions_out;
    cmd_fpca->add_option("--in", fpca_in, "Input series CSV")->required();
    cmd_fpca->add_option("--u", fpca_u, "Rescaled time in [0,1]")->required();
    cmd_fpca->add_option("--q", fpca_q, "Number of components")->required();
    cmd_fpca->add_flag("--center,!--no-center", fpca_center,
                       "Center by the local mean (default on)");
    add_kernel_flags(cmd_fpca, fpca_opts, /*with_k2=*/false);
    cmd_fpca->add_option("--out-values", fpca_values_out, "Eigenvalue CSV")->required();
    cmd_fpca->add_option("--out-functions", fpca_functions_out, "Eigenfunction CSV")->required();

    // --- longrun ------------------------------------------------------------
    auto* cmd_lr = subcommand("longrun", "Long-run covariance kernel at u");
    CommonOpts lr_opts;
    double lr_u = 0.5;
    std::string lr_in, lr_out;
    cmd_lr->add_option("--in", lr_in, "Input series CSV")->required();
    cmd_lr->add_option("--u", lr_u, "Rescaled time in [0,1]")->required();
    add_kernel_flags(cmd_lr, lr_opts, /*with_k2=*/true);
    cmd_lr->add_option("--out", lr_out, "Output kernel CSV")->required();

    // --- predict ------------------------------------------------------------
    auto* cmd_pred = subcommand("predict", "k-step-ahead prediction");
    CommonOpts pred_opts;
    long pred_t1 = 0, pred_k = 1, pred_T = 0;
    int pred_q = 0;
    double pred_u = -1.0;
    bool pred_center = false;
    std::string pred_in, pred_out;
    cmd_pred->add_option("--in", pred_in, "Input series CSV (observed curves)")->required();
    cmd_pred->add_option("--t1", pred_t1, "Use only the first t1 curves (default: all)");
    cmd_pred->add_option("--k", pred_k, "Steps ahead")->required();
    cmd_pred->add_option("--q", pred_q, "Projection order (default: ratio-selected)");
    cmd_pred->add_option("--T", pred_T, "Nominal total length (default: t1+k+1)");
    cmd_pred->add_option("--u", pred_u, "Rescaled time (default: t1/T)");
    cmd_pred->add_flag("--center", pred_center, "Center the prediction covariance");
    add_kernel_flags(cmd_pred, pred_opts, /*with_k2=*/false);
    cmd_pred->add_option("--out", pred_out, "Output curve CSV")->required();

    // --- two-sample -----------------------------------------------------------
    auto* cmd_ts = subcommand("two-sample", "Test equality of local mean functions");
    CommonOpts ts_opts;
    double ts_u = 0.5, ts_eps0 = 1e-4;
    std::string ts_x, ts_y, ts_q = "auto", ts_method = "chisq", ts_out;
    long ts_mc = 100000;
    std::uint64_t ts_mc_seed = 20210428;
    cmd_ts->add_option("--x", ts_x, "First series CSV")->required();
    cmd_ts->add_option("--y", ts_y, "Second series CSV")->required();
    cmd_ts->add_option("--u", ts_u, "Rescaled time in [0,1]")->required();
    cmd_ts->add_option("--q", ts_q, "Projection order: auto or a positive integer");
    cmd_ts->add_option("--eps0", ts_eps0, "Relative threshold for the ratio selector");
    cmd_ts->add_option("--method", ts_method, "P-value method: chisq|mc");
    cmd_ts->add_option("--mc-draws", ts_mc, "Monte Carlo draws for --method mc");
    cmd_ts->add_option("--mc-seed", ts_mc_seed, "Seed for --method mc");
    add_kernel_flags(cmd_ts, ts_opts, /*with_k2=*/true);
    cmd_ts->add_option("--out", ts_out, "Output JSON (default: stdout)");

    // --- bench ---------------------------------------------------------------
    auto* cmd_bench = subcommand("bench", "Run a manifest experiment");
    std::string bench_experiment, bench_manifest, bench_out;
    bool bench_list = false;
    cmd_bench->add_option("--experiment", bench_experiment, "Experiment name");
    cmd_bench->add_flag("--list", bench_list, "List available experiments");
    cmd_bench->add_option("--manifest", bench_manifest,
                          "Manifest JSON (default: the built-in copy of bench/manifest.json)");
    cmd_bench->add_option("--out", bench_out, "Output table CSV (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n' << app.help();
        return 1;
    }

    if (cmd_sim->parsed()) {
        const json config_json =
            sim_config.empty() ? json::parse(kDefaultSimConfig) : read_json_file(sim_config);
        sim::SimConfig cfg = sim::config_from_json(config_json);
        cfg.seed = sim_seed;
        const Grid grid = make_uniform_grid(sim_n);
        io::write_series(sim::simulate_lsfts(cfg, sim_T, grid), sim_out);
        return 0;
    }

    if (cmd_mean->parsed()) {
        const FunctionalSeries x = io::read_series(mean_in);
        const double h = resolve_h(mean_opts.h, mean_opts.h_scale, x.length(),
                                   BandwidthMode::estimation);
        const Eigen::VectorXd m = local_mean(x, mean_u, h, parse_k1(mean_opts.k1),
                                             parse_weights(mean_opts.weights));
        io::write_curve(m, x.grid, mean_out);
        return 0;
    }

    if (cmd_fpca->parsed()) {
        const FunctionalSeries x = io::read_series(fpca_in);
        const double h = resolve_h(fpca_opts.h, fpca_opts.h_scale, x.length(),
                                   BandwidthMode::estimation);
        const LocalCovariance cov = local_cov(x, fpca_u, h, parse_k1(fpca_opts.k1), fpca_center,
                                              parse_weights(fpca_opts.weights));
        const EigenSystem es = local_fpca(cov, fpca_q);
        io::write_eigenvalues(es.eigenvalues, fpca_values_out);
        io::write_eigenfunctions(es, x.grid, fpca_functions_out);
        return 0;
    }

    if (cmd_lr->parsed()) {
        const FunctionalSeries x = io::read_series(lr_in);
        const double h = resolve_h(lr_opts.h, lr_opts.h_scale, x.length(),
                                   BandwidthMode::inference);
        const double b = lr_opts.b > 0.0 ? lr_opts.b : default_bandwidth_b(x.length(), h);
        io::write_kernel(longrun_cov(x, lr_u, h, b, parse_k1(lr_opts.k1), parse_k2(lr_opts.k2)),
                         lr_out);
        return 0;
    }

    if (cmd_pred->parsed()) {
        FunctionalSeries x = io::read_series(pred_in);
        if (pred_t1 > 0) {
            if (pred_t1 > x.length())
                throw InvalidArgument("predict: --t1 exceeds the number of observed curves");
            x = make_series(x.values.topRows(pred_t1), x.grid);
        }
        const long T1 = x.length();
        const long T = pred_T > 0 ? pred_T : T1 + pred_k + 1;
        const double u = pred_u >= 0.0 ? pred_u : static_cast<double>(T1) / T;
        const double h = resolve_h(pred_opts.h, pred_opts.h_scale, T1, BandwidthMode::estimation);
        const Eigen::VectorXd yhat =
            predict_k_step(x, T, pred_k, pred_q, u, h, parse_k1(pred_opts.k1), pred_center);
        io::write_curve(yhat, x.grid, pred_out);
        return 0;
    }

    if (cmd_ts->parsed()) {
        const FunctionalSeries x = io::read_series(ts_x);
        const FunctionalSeries y = io::read_series(ts_y);
        const double h = resolve_h(ts_opts.h, ts_opts.h_scale, std::min(x.length(), y.length()),
                                   BandwidthMode::inference);
        const double b = ts_opts.b > 0.0
                             ? ts_opts.b
                             : default_bandwidth_b(std::min(x.length(), y.length()), h);
        int q = -1;
        if (ts_q != "auto") {
            try {
                q = std::stoi(ts_q);
            } catch (const std::exception&) {
                throw InvalidArgument("two-sample: --q must be 'auto' or a positive integer");
            }
            if (q < 1) throw InvalidArgument("two-sample: --q must be positive");
        }
        PValueMethod method;
        if (ts_method == "chisq") method = PValueMethod::chisq;
        else if (ts_method == "mc") method = PValueMethod::mc_weighted;
        else throw InvalidArgument("two-sample: --method must be chisq or mc");

        const TwoSampleResult res =
            projected_tests(x, y, ts_u, h, b, q, parse_k1(ts_opts.k1), parse_k2(ts_opts.k2),
                            ts_eps0, method, ts_mc, ts_mc_seed);
        json out{{"statistic_U", res.statistic_U},
                 {"statistic_Ubar", res.statistic_Ubar},
                 {"statistic_Utilde", res.statistic_Utilde},
                 {"q_used", res.q_used},
                 {"p_value", res.p_value},
                 {"method", method == PValueMethod::chisq ? "chisq" : "mc_weighted"},
                 {"theta_hat", res.theta_hat}};
        if (ts_out.empty()) {
            std::cout << out.dump(2) << '\n';
        } else {
            std::ofstream f(ts_out);
            if (!f) throw DataError("cannot open '" + ts_out + "' for writing");
            f << out.dump(2) << '\n';
        }
        return 0;
    }

    if (cmd_bench->parsed()) {
        if (bench_list) {
            for (const std::string& name : bench::experiment_names()) std::cout << name << '\n';
            return 0;
        }
        if (bench_experiment.empty())
            throw InvalidArgument("bench: pass --experiment NAME or --list");
        const json manifest =
            bench_manifest.empty() ? bench::default_manifest() : read_json_file(bench_manifest);
        const bench::Table table = bench::run_experiment(bench_experiment, manifest);
        if (bench_out.empty()) {
            std::cout << table.to_csv();
        } else {
            std::ofstream f(bench_out);
            if (!f) throw DataError("cannot open '" + bench_out + "' for writing");
            f << table.to_csv();
        }
        return 0;
    }

    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    apply_thread_cap();
    try {
        return dispatch(args);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace lsfts::cli

#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace lsfts::bench {

/// A rectangular result table, printed as CSV by the bench subcommand and
/// consumed programmatically by the acceptance suite.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string to_csv() const;
};

/// The built-in experiment manifest (models, seeds, sample-size ladders,
/// replicate counts). A copy lives in bench/manifest.json; rerunning any
/// experiment from the same manifest reproduces its table exactly.
const nlohmann::json& default_manifest();

std::vector<std::string> experiment_names();

/// Runs one named experiment from a manifest.
Table run_experiment(const std::string& name, const nlohmann::json& manifest);

/// Least-squares slope of log10(y) against log10(x); the rate diagnostic
/// used by the decay experiments.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace lsfts::bench

#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "lsfts/kernels.hpp"
#include "lsfts/operators.hpp"
#include "lsfts/series.hpp"

namespace lsfts::sim {

/// Smooth scalar path on [0,1] in one of a few parametric families; used for
/// the time-varying AR coefficients, innovation scales, and mean components.
struct CoefPath {
    enum class Kind { constant, linear, sine };
    Kind kind = Kind::constant;
    double c0 = 0.0;
    double c1 = 0.0;    ///< slope (linear) or amplitude (sine)
    double freq = 1.0;  ///< sine only
    double phase = 0.0; ///< sine only

    double operator()(double u) const;
};

/// One basis coefficient: a time-varying AR(1) recursion
///   xi_t = a(t/T) xi_{t-1} + sigma(t/T) e_t,  e_t iid N(0,1).
struct ComponentModel {
    CoefPath a;
    CoefPath sigma;
};

/// One additive mean term path(u) * phi_component(s) on the Fourier basis.
struct MeanTerm {
    CoefPath path;
    int component = 1;
};

/// Full generative description of a locally stationary model on the Fourier
/// basis. Every estimator in the library has a closed-form oracle under this
/// model: the local covariance of component k is sigma_k^2(u)/(1 - a_k^2(u))
/// and its long-run counterpart is sigma_k^2(u)/(1 - a_k(u))^2, both with
/// eigenfunction phi_k.
struct SimConfig {
    std::vector<ComponentModel> components;
    std::vector<MeanTerm> mean; ///< empty = zero mean
    std::uint64_t seed = 1;
};

SimConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SimConfig& cfg);

/// Orthonormal Fourier basis on [0,1], 1-indexed:
///   phi_1 = 1, phi_{2m} = sqrt(2) cos(2 pi m s), phi_{2m+1} = sqrt(2) sin(2 pi m s).
Eigen::VectorXd fourier_basis(int k, const Grid& grid);

/// Mean curve m(u, .) of the configured model on the grid.
Eigen::VectorXd mean_curve(const SimConfig& cfg, double u, const Grid& grid);

/// Simulates T curves of the locally stationary series: for each component,
/// the AR recursion is run with coefficients moving along t/T after a 500
/// step burn-in at the path start, and curves are assembled on the Fourier
/// basis. Deterministic given the seed; component streams are independent.
/// Throws when sup_u |a_k(u)| reaches 1 or sigma_k is not positive.
FunctionalSeries simulate_lsfts(const SimConfig& cfg, long T, const Grid& grid);

/// The stationary companion process at rescaled time u: the same recursion
/// with coefficients frozen at u, consuming innovations in the same order as
/// simulate_lsfts so the two can be coupled by sharing a seed.
FunctionalSeries stationary_approx(const SimConfig& cfg, double u, long T, const Grid& grid);

/// Analytic local covariance kernel at u (mean-zero configurations only).
LocalCovariance true_local_covariance(const SimConfig& cfg, double u, const Grid& grid);

/// Analytic long-run covariance kernel at u (mean-zero configurations only).
LocalCovariance true_longrun_cov(const SimConfig& cfg, double u, const Grid& grid);

/// Analytic spectrum at u: eigenvalues in descending order with the 1-based
/// basis index of the matching eigenfunction.
struct OracleSpectrum {
    Eigen::VectorXd values;
    std::vector<int> component;
};

OracleSpectrum true_local_spectrum(const SimConfig& cfg, double u);
OracleSpectrum true_longrun_spectrum(const SimConfig& cfg, double u);

/// Literal triple-loop reference implementation of the local covariance
/// estimator, kept deliberately unvectorized as the ground truth for
/// oracle-equivalence tests. Enforces small inputs (T <= 50, n <= 16).
LocalCovariance brute_force_local_cov(const FunctionalSeries& series, double u, double h,
                                      const SmoothingKernel& kernel, bool center);

} // namespace lsfts::sim

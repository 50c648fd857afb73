#pragma once

#include <Eigen/Dense>

#include "lsfts/grid.hpp"

namespace lsfts {

/// T curves observed in time order, sampled on a shared grid.
/// Row t of `values` is the curve observed at time t+1 (1-based time runs
/// over 1..T; rescaled time of row t is (t+1)/T).
struct FunctionalSeries {
    Eigen::MatrixXd values; ///< T x n
    Grid grid;

    Eigen::Index length() const { return values.rows(); }
};

/// Builds a series after validating it: at least two curves, every value
/// finite, column count matching the grid.
FunctionalSeries make_series(Eigen::MatrixXd values, Grid grid);

} // namespace lsfts

#pragma once

#include <string>

#include "lsfts/operators.hpp"
#include "lsfts/series.hpp"

namespace lsfts::io {

/// Series CSV layout: the first row holds the grid points (strictly
/// increasing, uniformly spaced), every following row one curve in time
/// order. Numbers are written with 17 significant digits so a round trip
/// reproduces every double exactly. Quadrature weights are derived from the
/// grid row at load time (trapezoid rule); non-uniform grids are rejected.

FunctionalSeries read_series(const std::string& path);
void write_series(const FunctionalSeries& series, const std::string& path);

/// Single-curve files share the series layout with exactly one value row.
struct Curve {
    Eigen::VectorXd values;
    Grid grid;
};

Curve read_curve(const std::string& path);
void write_curve(const Eigen::VectorXd& values, const Grid& grid, const std::string& path);

/// Kernel matrices are written with the grid row on top and one kernel row
/// per line (an n-curve series, so they round-trip through read_series).
void write_kernel(const LocalCovariance& cov, const std::string& path);

/// Eigenvalues: one value per line. Eigenfunctions: first column the grid
/// points, then one column per component.
void write_eigenvalues(const Eigen::VectorXd& values, const std::string& path);
void write_eigenfunctions(const EigenSystem& es, const Grid& grid, const std::string& path);

/// Shortest exact decimal form used everywhere: printf %.17g.
std::string format_double(double x);

} // namespace lsfts::io

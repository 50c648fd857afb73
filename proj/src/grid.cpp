#include "lsfts/grid.hpp"

namespace lsfts {

Grid make_uniform_grid(int n, int d) {
    if (d != 1)
        throw InvalidArgument("make_uniform_grid: only d=1 grids are supported");
    if (n < 2)
        throw InvalidArgument("make_uniform_grid: need at least 2 points, got " +
                              std::to_string(n));

    Grid g;
    g.points = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
    const double step = 1.0 / (n - 1);
    g.weights = Eigen::VectorXd::Constant(n, step);
    g.weights(0) = 0.5 * step;
    g.weights(n - 1) = 0.5 * step;
    return g;
}

bool same_grid(const Grid& a, const Grid& b) {
    return a.points.size() == b.points.size() && a.points == b.points;
}

double inner_product(const Eigen::VectorXd& f, const Eigen::VectorXd& g, const Grid& grid) {
    if (f.size() != grid.size() || g.size() != grid.size())
        throw InvalidArgument("inner_product: curve length does not match the grid");
    return (f.array() * g.array() * grid.weights.array()).sum();
}

double l2_norm(const Eigen::VectorXd& f, const Grid& grid) {
    return std::sqrt(std::max(0.0, inner_product(f, f, grid)));
}

} // namespace lsfts

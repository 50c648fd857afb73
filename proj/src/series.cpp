#include "lsfts/series.hpp"

namespace lsfts {

FunctionalSeries make_series(Eigen::MatrixXd values, Grid grid) {
    if (values.rows() < 2)
        throw InvalidArgument("make_series: a functional series needs at least 2 curves");
    if (values.cols() != grid.size())
        throw InvalidArgument("make_series: curve length does not match the grid");
    if (!values.allFinite())
        throw NumericError("make_series: series contains non-finite values");
    return FunctionalSeries{std::move(values), std::move(grid)};
}

} // namespace lsfts

#include "lsfts/operators.hpp"

#include <Eigen/Eigenvalues>

namespace lsfts {

namespace {

void require_symmetric(const Eigen::MatrixXd& k) {
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    const double asym = (k - k.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale)
        throw InvalidArgument("operator_eigh: kernel is not symmetric (relative asymmetry " +
                              std::to_string(asym / scale) + ")");
}

/// Symmetric eigendecomposition of W^{1/2} K W^{1/2}, eigenvalues descending.
void weighted_eigh(const LocalCovariance& cov, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
    const Eigen::VectorXd sqrt_w = cov.grid.weights.cwiseSqrt();
    Eigen::MatrixXd m = sqrt_w.asDiagonal() * cov.kernel * sqrt_w.asDiagonal();
    m = 0.5 * (m + m.transpose().eval()); // scrub roundoff asymmetry

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericError("operator_eigh: eigendecomposition failed");

    values = solver.eigenvalues().reverse();
    vectors = solver.eigenvectors().rowwise().reverse();
}

} // namespace

EigenSystem operator_eigh(const LocalCovariance& cov, int q) {
    const Eigen::Index n = cov.grid.size();
    if (cov.kernel.rows() != n || cov.kernel.cols() != n)
        throw InvalidArgument("operator_eigh: kernel shape does not match the grid");
    if (!cov.kernel.allFinite())
        throw NumericError("operator_eigh: kernel contains non-finite values");
    if (q < 1 || q > n)
        throw InvalidArgument("operator_eigh: order q must lie in [1, n], got " +
                              std::to_string(q));
    require_symmetric(cov.kernel);

    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    weighted_eigh(cov, values, vectors);

    EigenSystem es;
    es.eigenvalues = values.head(q);
    es.eigenfunctions.resize(n, q);
    const Eigen::VectorXd inv_sqrt_w = cov.grid.weights.cwiseSqrt().cwiseInverse();
    for (int j = 0; j < q; ++j) {
        Eigen::VectorXd v = inv_sqrt_w.asDiagonal() * vectors.col(j);
        const double norm = std::sqrt((v.array().square() * cov.grid.weights.array()).sum());
        if (norm > 0.0) v /= norm;
        es.eigenfunctions.col(j) = v;
    }
    return es;
}

double operator_norm_bound(const LocalCovariance& a, const LocalCovariance& b) {
    if (!same_grid(a.grid, b.grid))
        throw InvalidArgument("operator_norm_bound: operators live on different grids");

    LocalCovariance diff{a.kernel - b.kernel, a.grid, a.u, a.h};
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    weighted_eigh(diff, values, vectors);
    return values.cwiseAbs().maxCoeff();
}

bool clip_negative_eigenvalues(EigenSystem& es) {
    bool clipped = false;
    for (Eigen::Index j = 0; j < es.eigenvalues.size(); ++j) {
        if (es.eigenvalues(j) < 0.0) {
            es.eigenvalues(j) = 0.0;
            clipped = true;
        }
    }
    es.clipped = es.clipped || clipped;
    return clipped;
}

} // namespace lsfts

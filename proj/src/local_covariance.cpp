#include "lsfts/local_covariance.hpp"

#include "lsfts/local_mean.hpp"

namespace lsfts {

LocalCovariance local_cov(const FunctionalSeries& series, double u, double h,
                          const SmoothingKernel& kernel, bool center, WeightMode mode) {
    const LocalWeights lw = local_weights(u, series.length(), h, kernel, mode);
    const Eigen::Index n = series.grid.size();
    const Eigen::Index rows = lw.hi - lw.lo;

    // Copy of the active window, centered in place when requested. Column
    // major so the time loop below runs down contiguous memory.
    Eigen::MatrixXd block = series.values.middleRows(lw.lo, rows);
    if (center) {
        const Eigen::VectorXd mean = series.values.middleRows(lw.lo, rows).transpose() *
                                     lw.w.segment(lw.lo, rows);
        block.rowwise() -= mean.transpose();
    }
    const Eigen::VectorXd w = lw.w.segment(lw.lo, rows);

    LocalCovariance cov;
    cov.kernel.resize(n, n);
    cov.grid = series.grid;
    cov.u = u;
    cov.h = h;

#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            double acc = 0.0;
            const double* ci = block.col(i).data();
            const double* cj = block.col(j).data();
            for (Eigen::Index t = 0; t < rows; ++t) acc += w(t) * ci[t] * cj[t];
            cov.kernel(i, j) = acc;
            cov.kernel(j, i) = acc;
        }
    }
    return cov;
}

EigenSystem local_fpca(const LocalCovariance& cov, int q) {
    EigenSystem es = operator_eigh(cov, q);
    const double scale = std::max(1.0, std::abs(es.eigenvalues(0)));
    const double floor = -1e-10 * scale;
    for (Eigen::Index j = 0; j < es.eigenvalues.size(); ++j) {
        if (es.eigenvalues(j) < floor)
            throw NumericError("local_fpca: operator is not positive semidefinite (eigenvalue " +
                               std::to_string(es.eigenvalues(j)) +
                               "); check the centering and inputs");
        if (es.eigenvalues(j) < 0.0) {
            es.eigenvalues(j) = 0.0;
            es.clipped = true;
        }
    }
    return es;
}

SignAligned align_sign(const Eigen::VectorXd& v_hat, const Eigen::VectorXd& v_ref,
                       const Grid& grid) {
    const double ip = inner_product(v_hat, v_ref, grid);
    SignAligned out;
    out.ambiguous = (ip == 0.0);
    out.curve = (ip < 0.0) ? Eigen::VectorXd(-v_hat) : v_hat;
    return out;
}

} // namespace lsfts

#include "lsfts/prediction.hpp"

#include <cmath>

#include "lsfts/local_covariance.hpp"
#include "lsfts/two_sample.hpp"

namespace lsfts {

namespace {

/// Prediction weights 2 K1h(u - t/T)/(Th) over the observed range t = 1..T1.
LocalWeights prediction_weights(double u, long T1, long T, double h,
                                const SmoothingKernel& kernel) {
    LocalWeights lw = local_weights(u, T, h, kernel, WeightMode::paper);
    if (lw.lo >= T1)
        throw EmptyWindowError("prediction_cov: the kernel window lies beyond the observed range");
    lw.hi = std::min<Eigen::Index>(lw.hi, T1);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(T1);
    w.segment(lw.lo, lw.hi - lw.lo) = 2.0 * lw.w.segment(lw.lo, lw.hi - lw.lo);
    lw.w = std::move(w);
    lw.sum = lw.w.sum();
    if (lw.sum <= 0.0)
        throw EmptyWindowError("prediction_cov: every weight vanishes over the observed range");
    return lw;
}

} // namespace

LocalCovariance prediction_cov(const FunctionalSeries& observed, long T, double u, double h,
                               const SmoothingKernel& kernel, bool center) {
    const long T1 = observed.length();
    if (T1 >= T)
        throw InvalidArgument("prediction_cov: need T1 < T (observed length " +
                              std::to_string(T1) + ", nominal size " + std::to_string(T) + ")");
    if (u <= 0.0 || u >= 1.0)
        throw InvalidArgument("prediction_cov: u must lie in (0, 1)");

    const LocalWeights lw = prediction_weights(u, T1, T, h, kernel);
    const Eigen::Index n = observed.grid.size();
    const Eigen::Index rows = lw.hi - lw.lo;

    Eigen::MatrixXd block = observed.values.middleRows(lw.lo, rows);
    if (center) {
        const Eigen::VectorXd mean = block.transpose() * lw.w.segment(lw.lo, rows);
        block.rowwise() -= mean.transpose();
    }
    const Eigen::VectorXd w = lw.w.segment(lw.lo, rows);

    LocalCovariance cov;
    cov.kernel.resize(n, n);
    cov.grid = observed.grid;
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

Eigen::VectorXd predict_k_step(const FunctionalSeries& observed, long T, long k, int q,
                               double u, double h, const SmoothingKernel& kernel, bool center) {
    const long T1 = observed.length();
    if (k < 1) throw InvalidArgument("predict_k_step: need k >= 1");
    if (T1 + k >= T)
        throw InvalidArgument("predict_k_step: horizon condition T1 + k < T violated (T1=" +
                              std::to_string(T1) + ", k=" + std::to_string(k) +
                              ", T=" + std::to_string(T) + ")");

    const LocalCovariance cov = prediction_cov(observed, T, u, h, kernel, center);
    const Eigen::Index n = observed.grid.size();

    int q_used = q;
    EigenSystem es;
    if (q_used <= 0) {
        es = operator_eigh(cov, static_cast<int>(n));
        clip_negative_eigenvalues(es);
        q_used = select_q_ratio(es.eigenvalues, static_cast<int>(std::min<Eigen::Index>(10, n - 1)),
                                1e-4);
    } else {
        if (q_used > n)
            throw InvalidArgument("predict_k_step: q exceeds the grid size");
        es = operator_eigh(cov, q_used);
    }

    const Eigen::VectorXd last = observed.values.row(T1 - 1).transpose();
    Eigen::VectorXd prediction = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < q_used; ++j) {
        const Eigen::VectorXd v = es.eigenfunctions.col(j);
        prediction += inner_product(last, v, observed.grid) * v;
    }
    return prediction;
}

} // namespace lsfts

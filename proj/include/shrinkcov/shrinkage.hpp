#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shrinkcov/cov.hpp"
#include "shrinkcov/longrun.hpp"
#include "shrinkcov/normal.hpp"

namespace shrinkcov {

enum class TargetKind { identity, diagonal };

struct ShrinkageEstimate {
    Matrix matrix;
    double weight = 0.0;
    TargetKind target = TargetKind::identity;
    /// tr* of the unshrunk sample covariance.
    double scaled_trace = 0.0;
    std::size_t n = 0;
};

inline void check_weight(double w) {
    if (!(w >= 0.0 && w <= 1.0))
        throw config_error("shrinkage: weight must lie in [0, 1], got " + std::to_string(w));
}

/// (1 - W) S + W tr*(S) I. Positive definite whenever W > 0 and tr*(S) > 0.
inline ShrinkageEstimate shrink_to_identity(const CovMatrix& cov, double weight) {
    check_weight(weight);
    const double tr = scaled_trace(cov);
    Matrix m = (1.0 - weight) * cov.values;
    m.diagonal().array() += weight * tr;
    return {std::move(m), weight, TargetKind::identity, tr, cov.n};
}

/// (1 - W) S + W diag^2(S): the diagonal is kept, off-diagonals scale by 1 - W.
inline ShrinkageEstimate shrink_to_diagonal(const CovMatrix& cov, double weight) {
    check_weight(weight);
    Matrix m = (1.0 - weight) * cov.values;
    m.diagonal() = cov.values.diagonal();
    return {std::move(m), weight, TargetKind::diagonal, scaled_trace(cov), cov.n};
}

/// Asymptotic interval center +- z_{1-alpha/2} sigma_tr / sqrt(n) for the
/// scaled trace.
struct TraceInterval {
    double center = 0.0;
    double half_width = 0.0;
    double alpha = 0.1;
    double sigma_tr = 0.0;
    std::size_t n = 0;
    /// The long-run variance hit its floor; the width is not informative.
    bool degenerate = false;

    double lower() const { return center - half_width; }
    double upper() const { return center + half_width; }
    bool contains(double x) const { return lower() <= x && x <= upper(); }
};

inline void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw config_error("alpha must lie in (0, 1), got " + std::to_string(alpha));
}

/// Half-width of a normal interval: z_p * sigma / sqrt(n).
inline double normal_margin(double p, double sigma, std::size_t n) {
    return normal_quantile(p) * sigma / std::sqrt(static_cast<double>(n));
}

inline TraceInterval trace_interval(double center, double sigma_sq, std::size_t n, double alpha,
                                    bool degenerate) {
    check_alpha(alpha);
    if (n == 0)
        throw data_error("trace interval: n must be positive");
    if (!(sigma_sq >= 0.0))
        throw numeric_error("trace interval: negative variance");
    const double sigma = std::sqrt(sigma_sq);
    return {center, normal_margin(1.0 - alpha / 2.0, sigma, n), alpha, sigma, n, degenerate};
}

inline TraceInterval trace_confidence_interval(const CovMatrix& cov, const LongRunVariance& lrv,
                                               double alpha) {
    return trace_interval(scaled_trace(cov), lrv.sigma_tr_sq, cov.n, alpha, lrv.clamped);
}

/// Shrinkage estimate shifted down and up by W z_{1-alpha/2} sigma_tr / sqrt(n)
/// on the diagonal. Off-diagonal entries equal those of the estimate.
struct MatrixBounds {
    Matrix lower;
    Matrix upper;
    double shift = 0.0;
    bool degenerate = false;
};

inline MatrixBounds shrinkage_bounds(const ShrinkageEstimate& est, const LongRunVariance& lrv,
                                     double alpha) {
    if (est.target != TargetKind::identity)
        throw config_error("shrinkage_bounds: bounds are only defined for the identity target");
    check_alpha(alpha);
    const double shift = est.weight * normal_margin(1.0 - alpha / 2.0, lrv.sigma_tr(), est.n);
    MatrixBounds b{est.matrix, est.matrix, shift, lrv.clamped};
    b.lower.diagonal().array() -= shift;
    b.upper.diagonal().array() += shift;
    return b;
}

struct ProjectionVariance {
    double lower = 0.0;
    double point = 0.0;
    double upper = 0.0;
};

/// w' S^s w -+ z_p (sigma_tr / sqrt(n)) ||w||_2^2. The lower value is raw and
/// may be negative. Use p = 1 - alpha/2 for a two-sided pair, 1 - alpha for
/// a single bound.
inline ProjectionVariance projection_variance_bounds(const ShrinkageEstimate& est, const Vector& w,
                                                     const LongRunVariance& lrv, double p) {
    if (est.target != TargetKind::identity)
        throw config_error("projection_variance_bounds: requires an identity-target estimate");
    if (w.size() != est.matrix.rows())
        throw config_error("projection_variance_bounds: weight vector has length " +
                           std::to_string(w.size()) + ", expected " +
                           std::to_string(est.matrix.rows()));
    if (!w.allFinite())
        throw data_error("projection_variance_bounds: non-finite weight vector");
    const double point = w.dot(est.matrix * w);
    const double margin = normal_margin(p, lrv.sigma_tr(), est.n) * w.squaredNorm();
    return {point - margin, point, point + margin};
}

/// Approximate covariance of sqrt(n/d) (s^2_nu - sigma^2_nu): entries
/// beta_sq(nu, mu) / d. `raw` keeps the ordered-pair estimates as they are
/// (not exactly symmetric, possibly indefinite); `psd` is the symmetrized
/// matrix with negative eigenvalues set to zero.
struct DiagEstimatorCovariance {
    Matrix raw;
    Matrix psd;
};

inline Matrix nearest_psd(const Matrix& a) {
    const Matrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw numeric_error("nearest_psd: symmetric eigensolver did not converge");
    const Vector clipped = solver.eigenvalues().cwiseMax(0.0);
    Matrix out = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().transpose();
    out = 0.5 * (out + out.transpose()).eval();
    return out;
}

inline DiagEstimatorCovariance diag_estimator_covariance(const ReturnsPanel& panel,
                                                         const KernelSpec& kernel,
                                                         std::size_t threads = 1) {
    const CenteredSquares squares(panel);
    Matrix raw = beta_sq_matrix(squares, kernel, threads) / static_cast<double>(panel.cols());
    Matrix psd = nearest_psd(raw);
    return {std::move(raw), std::move(psd)};
}

struct MarginalInterval {
    double center = 0.0;
    double half_width = 0.0;
    /// beta_sq(nu, nu) was negative and replaced by 0.
    bool clamped = false;

    double lower() const { return center - half_width; }
    double upper() const { return center + half_width; }
    bool contains(double x) const { return lower() <= x && x <= upper(); }
};

/// Per-coordinate intervals for the variances: s^2_nu +- z_{1-alpha/2}
/// sqrt(beta_sq(nu, nu) / n), with s^2_nu the zero-mean second moment.
inline std::vector<MarginalInterval> diag_marginal_intervals(const ReturnsPanel& panel,
                                                             const KernelSpec& kernel,
                                                             double alpha) {
    check_alpha(alpha);
    const CenteredSquares squares(panel);
    check_lag(squares.rows(), kernel.m, "diag_marginal_intervals: lag truncation");
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double n = static_cast<double>(panel.rows());
    std::vector<MarginalInterval> out(panel.cols());
    for (std::size_t nu = 0; nu < panel.cols(); ++nu) {
        double b = squares.beta_sq(nu, nu, kernel);
        auto& iv = out[nu];
        iv.center = panel.column(nu).squaredNorm() / n;
        if (b < 0.0) {
            b = 0.0;
            iv.clamped = true;
        }
        iv.half_width = z * std::sqrt(b / n);
    }
    return out;
}

} // namespace shrinkcov

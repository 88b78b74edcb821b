#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "shrinkcov/panel.hpp"

namespace shrinkcov {

/// `none` is the zero-mean form (1/n) sum Y_i Y_i'. `mean` subtracts the
/// column means first; real return panels are rarely exactly centered.
enum class Centering { none, mean };

/// Symmetric d x d covariance estimate plus the sample size behind it.
struct CovMatrix {
    Matrix values;
    std::size_t n = 0;
    Centering centering = Centering::none;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(values.rows()); }
};

/// Only the lower triangle is accumulated; the upper one is a mirror, so the
/// result is exactly symmetric.
inline CovMatrix sample_covariance(const ReturnsPanel& panel, Centering centering = Centering::none) {
    panel.require_rows(2, "sample_covariance");
    const auto n = static_cast<Eigen::Index>(panel.rows());
    const auto d = static_cast<Eigen::Index>(panel.cols());

    Matrix centered;
    const Matrix* x = &panel.data();
    if (centering == Centering::mean) {
        centered = panel.data().rowwise() - panel.data().colwise().mean();
        x = &centered;
    }

    Matrix s = Matrix::Zero(d, d);
    s.selfadjointView<Eigen::Lower>().rankUpdate(x->transpose(), 1.0 / static_cast<double>(n));
    s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
    return {std::move(s), panel.rows(), centering};
}

inline double trace(const Matrix& a) { return a.diagonal().sum(); }
inline double trace(const CovMatrix& cov) { return trace(cov.values); }

/// tr*(A) = tr(A) / d. Equals 1 for the identity in every dimension.
inline double scaled_trace(const Matrix& a) {
    return trace(a) / static_cast<double>(a.rows());
}
inline double scaled_trace(const CovMatrix& cov) { return scaled_trace(cov.values); }

/// Frobenius inner product (A, B) = tr(A'B).
inline double frobenius_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw config_error("frobenius_inner: dimension mismatch");
    return a.cwiseProduct(b).sum();
}

/// Orthogonal projection of A onto span{B} under the Frobenius inner product:
/// (A, B) B / (B, B). With B = I this is tr*(A) I.
inline Matrix project_onto_span(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw config_error("project_onto_span: dimension mismatch");
    const double bb = frobenius_inner(b, b);
    if (!(bb > 0.0))
        throw config_error("project_onto_span: degenerate span (B = 0)");
    return (frobenius_inner(a, b) / bb) * b;
}

/// Diagonal shrinkage target: the diagonal of a covariance matrix, i.e. its
/// projection onto the subspace of diagonal matrices.
struct DiagTarget {
    Vector diag;

    Matrix as_matrix() const { return diag.asDiagonal(); }
};

inline DiagTarget diagonal_target(const Matrix& a) { return {a.diagonal()}; }
inline DiagTarget diagonal_target(const CovMatrix& cov) { return diagonal_target(cov.values); }

/// Absolute asymmetry tolerance used by the eigen routines, scaled by the
/// largest entry.
inline void require_symmetric(const Matrix& a, const char* who) {
    if (a.rows() != a.cols())
        throw numeric_error(std::string(who) + ": matrix is not square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw numeric_error(std::string(who) + ": matrix is not symmetric");
}

/// Eigenvalues of a symmetric matrix in descending order.
inline Vector eigenvalues(const Matrix& a) {
    require_symmetric(a, "eigenvalues");
    if (a.rows() == 0)
        return {};
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw numeric_error("eigenvalues: symmetric eigensolver did not converge");
    return solver.eigenvalues().reverse();
}

/// lambda_max / lambda_min from already sorted (descending) eigenvalues.
/// +infinity when lambda_min <= 0, where "0" means within d * epsilon *
/// lambda_max: a rank-deficient sample covariance comes back from the
/// eigensolver with smallest eigenvalues of either sign at rounding level.
inline double condition_number_from(const Vector& descending) {
    if (descending.size() == 0)
        return std::numeric_limits<double>::quiet_NaN();
    const double hi = descending(0);
    const double lo = descending(descending.size() - 1);
    const double tol = static_cast<double>(descending.size()) *
                       std::numeric_limits<double>::epsilon() * std::abs(hi);
    if (!(lo > tol))
        return std::numeric_limits<double>::infinity();
    return descending(0) / lo;
}

inline double condition_number(const Matrix& a) { return condition_number_from(eigenvalues(a)); }

} // namespace shrinkcov

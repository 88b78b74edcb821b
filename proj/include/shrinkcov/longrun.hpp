#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "shrinkcov/panel.hpp"
#include "shrinkcov/parallel.hpp"

namespace shrinkcov {

enum class KernelKind { truncated, bartlett };

/// Lag weights w_{m,tau} for tau = 1..m. Lags beyond m never enter.
///   truncated: w = 1
///   bartlett:  w = 1 - tau / (m + 1)
struct KernelSpec {
    KernelKind kind = KernelKind::truncated;
    std::size_t m = 1;

    KernelSpec() = default;
    /// m = 0 is promoted to 1.
    KernelSpec(KernelKind k, std::size_t lag) : kind(k), m(std::max<std::size_t>(1, lag)) {}

    double weight(std::size_t tau) const noexcept {
        if (tau == 0)
            return 1.0;
        if (tau > m)
            return 0.0;
        return kind == KernelKind::truncated
                   ? 1.0
                   : 1.0 - static_cast<double>(tau) / static_cast<double>(m + 1);
    }
};

/// m = max(1, floor(n^0.3)).
inline std::size_t default_lag_truncation(std::size_t n) {
    const auto m = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.3)));
    return std::max<std::size_t>(1, m);
}

/// Squared series centred by their full-sample means:
///   column nu holds (Y_i^(nu))^2 - mu_hat(nu), mu_hat(nu) = (1/n) sum_i (Y_i^(nu))^2.
/// Computed once per panel; every pair statistic reads from it.
class CenteredSquares {
public:
    explicit CenteredSquares(const ReturnsPanel& panel) {
        panel.require_rows(2, "long-run variance");
        values_ = panel.data().array().square().matrix();
        const Eigen::RowVectorXd means = values_.colwise().mean();
        values_.rowwise() -= means;
    }

    std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    const Matrix& values() const noexcept { return values_; }

    /// gamma_hat^(nu,mu)(tau) = (1/n) sum_{i=1}^{n-tau} S_i^(nu) S_{i+tau}^(mu).
    double cross_cov(std::size_t nu, std::size_t mu, std::size_t tau) const {
        const auto n = static_cast<Eigen::Index>(rows());
        const auto len = n - static_cast<Eigen::Index>(tau);
        return values_.col(static_cast<Eigen::Index>(nu)).head(len).dot(
                   values_.col(static_cast<Eigen::Index>(mu)).tail(len)) /
               static_cast<double>(n);
    }

    /// gamma_hat(0) + 2 sum_{tau=1}^{m} w_tau gamma_hat(tau). Only nonnegative
    /// lags of the ordered pair enter.
    double beta_sq(std::size_t nu, std::size_t mu, const KernelSpec& kernel) const {
        double acc = cross_cov(nu, mu, 0);
        for (std::size_t tau = 1; tau <= kernel.m; ++tau)
            acc += 2.0 * kernel.weight(tau) * cross_cov(nu, mu, tau);
        return acc;
    }

private:
    Matrix values_;
};

inline void check_lag(std::size_t n, std::size_t lag, const char* who) {
    if (lag >= n)
        throw config_error(std::string(who) + ": lag " + std::to_string(lag) +
                           " out of range for n = " + std::to_string(n));
}

inline void check_coordinate(std::size_t d, std::size_t idx, const char* who) {
    if (idx >= d)
        throw config_error(std::string(who) + ": coordinate " + std::to_string(idx) +
                           " out of range for d = " + std::to_string(d));
}

/// Lag-tau cross-covariance of the squared series nu and mu (0-based
/// coordinates), normalized by 1/n.
inline double cross_cov_squares(const ReturnsPanel& panel, std::size_t nu, std::size_t mu,
                                std::size_t tau) {
    panel.require_rows(2, "cross_cov_squares");
    check_coordinate(panel.cols(), nu, "cross_cov_squares");
    check_coordinate(panel.cols(), mu, "cross_cov_squares");
    check_lag(panel.rows(), tau, "cross_cov_squares");
    return CenteredSquares(panel).cross_cov(nu, mu, tau);
}

inline double beta_hat_sq(const ReturnsPanel& panel, std::size_t nu, std::size_t mu,
                          const KernelSpec& kernel) {
    panel.require_rows(2, "beta_hat_sq");
    check_coordinate(panel.cols(), nu, "beta_hat_sq");
    check_coordinate(panel.cols(), mu, "beta_hat_sq");
    check_lag(panel.rows(), kernel.m, "beta_hat_sq: lag truncation");
    return CenteredSquares(panel).beta_sq(nu, mu, kernel);
}

/// Per-coordinate long-run variance of the squares; the estimator used when
/// the coordinates are uncorrelated. Identical to beta_hat_sq(nu, nu).
inline double univariate_longrun_variance(const ReturnsPanel& panel, std::size_t nu,
                                          const KernelSpec& kernel) {
    return beta_hat_sq(panel, nu, nu, kernel);
}

/// Lower bound applied to the aggregated variance before taking its root.
inline constexpr double kLongRunFloor = 1e-12;

struct LongRunVariance {
    /// max(raw, floor).
    double sigma_tr_sq = 0.0;
    /// d^-2 sum_{nu,mu} beta_sq(nu, mu), before clamping.
    double sigma_tr_sq_raw = 0.0;
    /// beta_sq(nu, mu) for every ordered pair; not symmetric in general and
    /// entries may be negative.
    Matrix beta_sq;
    KernelSpec kernel;
    std::size_t n = 0;
    /// Set iff raw <= floor.
    bool clamped = false;

    double sigma_tr() const { return std::sqrt(sigma_tr_sq); }
};

/// All d^2 ordered pairs beta_sq(nu, mu), computed in parallel over
/// contiguous blocks of rows nu. Each pair lands in its own slot; the matrix
/// does not depend on the worker count.
inline Matrix beta_sq_matrix(const CenteredSquares& squares, const KernelSpec& kernel,
                             std::size_t threads = 1) {
    check_lag(squares.rows(), kernel.m, "long-run variance: lag truncation");
    const std::size_t d = squares.cols();
    Matrix beta(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    parallel_blocks(d, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t nu = begin; nu < end; ++nu)
            for (std::size_t mu = 0; mu < d; ++mu)
                beta(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(mu)) =
                    squares.beta_sq(nu, mu, kernel);
    });
    for (std::size_t nu = 0; nu < d; ++nu)
        for (std::size_t mu = 0; mu < d; ++mu)
            if (!std::isfinite(beta(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(mu))))
                throw numeric_error("long-run variance: non-finite estimate for pair (" +
                                    std::to_string(nu) + ", " + std::to_string(mu) + ")");
    return beta;
}

/// sigma_hat_tr^2 = d^-2 sum_{nu,mu} beta_sq(nu, mu), the long-run variance
/// of the scaled-trace estimator. The sum runs serially in row-major order,
/// so the value is bitwise identical for every `threads` setting (0 means
/// hardware concurrency).
inline LongRunVariance sigma_tr_sq(const ReturnsPanel& panel, const KernelSpec& kernel,
                                   std::size_t threads = 1) {
    const CenteredSquares squares(panel);
    LongRunVariance out;
    out.kernel = kernel;
    out.n = panel.rows();
    out.beta_sq = beta_sq_matrix(squares, kernel, threads);

    const auto d = out.beta_sq.rows();
    double sum = 0.0;
    for (Eigen::Index nu = 0; nu < d; ++nu)
        for (Eigen::Index mu = 0; mu < d; ++mu)
            sum += out.beta_sq(nu, mu);
    out.sigma_tr_sq_raw = sum / (static_cast<double>(d) * static_cast<double>(d));
    out.clamped = !(out.sigma_tr_sq_raw > kLongRunFloor);
    out.sigma_tr_sq = out.clamped ? kLongRunFloor : out.sigma_tr_sq_raw;
    return out;
}

} // namespace shrinkcov

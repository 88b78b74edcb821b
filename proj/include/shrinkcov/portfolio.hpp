#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "shrinkcov/cov.hpp"
#include "shrinkcov/longrun.hpp"
#include "shrinkcov/shrinkage.hpp"

namespace shrinkcov {

struct PortfolioWeights {
    Vector w;
    /// ||w||_1
    double gross_exposure = 0.0;
    /// w'1, equal to 1 up to rounding.
    double sum_check = 0.0;
};

/// Minimum-variance portfolio Sigma^-1 1 / (1' Sigma^-1 1) through a Cholesky
/// solve. Throws if the estimate is not positive definite; there is no
/// pseudo-inverse fallback.
inline PortfolioWeights min_variance_weights(const Matrix& sigma) {
    if (sigma.rows() == 0 || sigma.rows() != sigma.cols())
        throw config_error("min_variance_weights: expected a non-empty square matrix");
    const Eigen::LLT<Matrix> llt(sigma);
    const double pivot_floor = static_cast<double>(sigma.rows()) *
                               std::numeric_limits<double>::epsilon() *
                               sigma.diagonal().cwiseAbs().maxCoeff();
    if (llt.info() != Eigen::Success ||
        !(llt.matrixLLT().diagonal().array().square().minCoeff() > pivot_floor))
        throw numeric_error("min_variance_weights: covariance estimate is not positive definite "
                            "(use a shrinkage weight W > 0)");
    const Vector x = llt.solve(Vector::Ones(sigma.rows()));
    const double denom = x.sum();
    if (!(std::isfinite(denom) && denom > 0.0))
        throw numeric_error("min_variance_weights: degenerate solve (1' Sigma^-1 1 <= 0)");
    PortfolioWeights out;
    out.w = x / denom;
    out.gross_exposure = out.w.lpNorm<1>();
    out.sum_check = out.w.sum();
    return out;
}

inline PortfolioWeights min_variance_weights(const ShrinkageEstimate& est) {
    return min_variance_weights(est.matrix);
}

/// Level used for portfolio risk bounds: the 99% two-sided convention.
inline constexpr double kDefaultRiskLevel = 0.995;

struct RiskBounds {
    double risk = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    /// The radicand of the lower bound was negative and set to 0.
    bool clamped_lower = false;
    double p_level = kDefaultRiskLevel;
};

/// sqrt(w' S^s w -+ z_p (sigma_tr / sqrt(n)) ||w||_2^2), a negative radicand
/// for the lower bound becomes 0.
inline RiskBounds portfolio_risk_bounds(const ShrinkageEstimate& est, const PortfolioWeights& w,
                                        const LongRunVariance& lrv,
                                        double p = kDefaultRiskLevel) {
    if (!(p > 0.0 && p < 1.0))
        throw config_error("portfolio_risk_bounds: p must lie in (0, 1)");
    const auto var = projection_variance_bounds(est, w.w, lrv, p);
    RiskBounds out;
    out.p_level = p;
    out.risk = std::sqrt(std::max(0.0, var.point));
    out.clamped_lower = var.lower < 0.0;
    out.lower = out.clamped_lower ? 0.0 : std::sqrt(var.lower);
    out.upper = std::sqrt(std::max(0.0, var.upper));
    return out;
}

struct RollingStudyConfig {
    std::size_t window = 252;
    double weight = 0.2;
    double p_level = kDefaultRiskLevel;
    KernelKind kernel = KernelKind::truncated;
    /// Fixed lag truncation; default is floor(window^0.3).
    std::optional<std::size_t> lag;
    Centering centering = Centering::none;
    std::size_t threads = 1;
};

struct RollingPeriod {
    std::size_t period = 0;
    std::size_t first_row = 0;
    PortfolioWeights weights;
    RiskBounds risk;
    LongRunVariance lrv;
    double scaled_trace = 0.0;
    double cond_raw = 0.0;
    double cond_shrunk = 0.0;
};

struct RollingGap {
    std::size_t period = 0;
    std::string reason;
};

struct RollingStudy {
    std::vector<RollingPeriod> periods;
    std::vector<RollingGap> gaps;
    std::size_t discarded_rows = 0;
};

/// Consecutive non-overlapping windows; the trailing partial window is
/// dropped. Windows whose shrunk estimate is not positive definite are
/// reported as gaps instead of results.
inline RollingStudy rolling_portfolio_study(const ReturnsPanel& panel,
                                            const RollingStudyConfig& config) {
    if (config.window < 2)
        throw config_error("rolling study: window must be at least 2");
    if (config.window > panel.rows())
        throw config_error("rolling study: window " + std::to_string(config.window) +
                           " exceeds the " + std::to_string(panel.rows()) + " available rows");
    check_weight(config.weight);
    const std::size_t m = config.lag.value_or(default_lag_truncation(config.window));
    const KernelSpec kernel(config.kernel, m);

    RollingStudy study;
    const std::size_t count = panel.rows() / config.window;
    study.discarded_rows = panel.rows() - count * config.window;
    for (std::size_t k = 0; k < count; ++k) {
        const ReturnsPanel sub = panel.slice_rows(k * config.window, config.window);
        const CovMatrix cov = sample_covariance(sub, config.centering);
        const ShrinkageEstimate est = shrink_to_identity(cov, config.weight);
        RollingPeriod rec;
        rec.period = k;
        rec.first_row = k * config.window;
        rec.scaled_trace = est.scaled_trace;
        try {
            rec.weights = min_variance_weights(est);
        } catch (const Error& e) {
            study.gaps.push_back({k, e.what()});
            continue;
        }
        rec.lrv = sigma_tr_sq(sub, kernel, config.threads);
        rec.risk = portfolio_risk_bounds(est, rec.weights, rec.lrv, config.p_level);
        rec.cond_raw = condition_number(cov.values);
        rec.cond_shrunk = condition_number(est.matrix);
        study.periods.push_back(std::move(rec));
    }
    return study;
}

} // namespace shrinkcov

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "shrinkcov/panel.hpp"
#include "shrinkcov/rng.hpp"

namespace shrinkcov {

/// How innovations feed the coordinates. `shared` is the single-source
/// linear-process model: one epsilon_t drives every coordinate. `independent`
/// gives each coordinate its own stream and is meant for diagnostics.
enum class InnovationMode { shared, independent };

enum class InnovationDist { standard_normal };

/// Autoregressive coefficients rho_nu = 0.1 + 0.5 * nu / d, nu = 1..d.
inline std::vector<double> default_ar1_coefficients(std::size_t d) {
    std::vector<double> rho(d);
    for (std::size_t nu = 1; nu <= d; ++nu)
        rho[nu - 1] = 0.1 + (static_cast<double>(nu) / static_cast<double>(d)) * 0.5;
    return rho;
}

struct SimConfig {
    std::size_t n = 100;
    std::size_t d = 10;
    /// Empty means the default rule rho_nu = 0.1 + 0.5 nu / d; otherwise one
    /// coefficient per coordinate.
    std::vector<double> rho;
    InnovationDist innovation_dist = InnovationDist::standard_normal;
    InnovationMode innovations = InnovationMode::shared;
    /// Innovation standard deviation. 0 yields the all-zero panel.
    double innovation_sd = 1.0;
    std::uint64_t seed = 0;
    std::size_t burn_in = 200;

    std::vector<double> coefficients() const {
        return rho.empty() ? default_ar1_coefficients(d) : rho;
    }

    void validate() const {
        if (n == 0 || d == 0)
            throw config_error("simulation: n and d must be positive");
        if (!rho.empty() && rho.size() != d)
            throw config_error("simulation: expected " + std::to_string(d) +
                               " autoregressive coefficients, got " + std::to_string(rho.size()));
        for (double r : coefficients())
            if (!(std::abs(r) < 1.0))
                throw config_error("simulation: autoregressive coefficient " + std::to_string(r) +
                                   " is not stationary (|rho| must be < 1)");
        if (!(innovation_sd >= 0.0) || !std::isfinite(innovation_sd))
            throw config_error("simulation: innovation_sd must be finite and >= 0");
    }
};

/// Y_t = rho_nu Y_{t-1} + eps_t with Y_0 = 0; the first burn_in values are
/// dropped. Draw order: one innovation per time step in shared mode, d per
/// time step (coordinate-major within the step) in independent mode.
inline ReturnsPanel simulate_ar1_panel(const SimConfig& config) {
    config.validate();
    const auto rho = config.coefficients();
    const std::size_t d = config.d;
    const std::size_t total = config.burn_in + config.n;

    RandomStream rng(config.seed);
    Matrix out(static_cast<Eigen::Index>(config.n), static_cast<Eigen::Index>(d));
    std::vector<double> state(d, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        if (config.innovations == InnovationMode::shared) {
            const double eps = config.innovation_sd * rng.gaussian();
            for (std::size_t nu = 0; nu < d; ++nu)
                state[nu] = rho[nu] * state[nu] + eps;
        } else {
            for (std::size_t nu = 0; nu < d; ++nu)
                state[nu] = rho[nu] * state[nu] + config.innovation_sd * rng.gaussian();
        }
        if (t >= config.burn_in) {
            const auto row = static_cast<Eigen::Index>(t - config.burn_in);
            for (std::size_t nu = 0; nu < d; ++nu)
                out(row, static_cast<Eigen::Index>(nu)) = state[nu];
        }
    }
    return ReturnsPanel(std::move(out));
}

/// Exact stationary scaled trace (1/d) sum_nu sigma^2 / (1 - rho_nu^2) for
/// innovation variance sigma^2.
inline double true_scaled_trace_ar1(const SimConfig& config) {
    config.validate();
    const auto rho = config.coefficients();
    const double var = config.innovation_sd * config.innovation_sd;
    double sum = 0.0;
    for (double r : rho)
        sum += var / (1.0 - r * r);
    return sum / static_cast<double>(rho.size());
}

/// Finite moving-average truncation of a linear process:
///   Y_t^(nu) = sum_{j=0}^{J} c_j^(nu) eps_{t-j}.
struct LinearProcessSpec {
    /// coeffs[nu][j] = c_j^(nu). Rows may differ in length; missing
    /// trailing coefficients are zero.
    std::vector<std::vector<double>> coeffs;
    std::size_t n = 100;
    std::uint64_t seed = 0;
    double innovation_sd = 1.0;

    std::size_t dimension() const noexcept { return coeffs.size(); }

    std::size_t max_lag() const noexcept {
        std::size_t j = 0;
        for (const auto& c : coeffs)
            j = std::max(j, c.empty() ? 0 : c.size() - 1);
        return j;
    }

    void validate() const {
        if (n == 0)
            throw config_error("linear process: n must be positive");
        if (coeffs.empty())
            throw config_error("linear process: empty coefficient list");
        for (std::size_t nu = 0; nu < coeffs.size(); ++nu) {
            const auto& c = coeffs[nu];
            bool any = false;
            for (double v : c) {
                if (!std::isfinite(v))
                    throw config_error("linear process: non-finite coefficient for coordinate " +
                                       std::to_string(nu));
                any = any || v != 0.0;
            }
            if (!any)
                throw config_error("linear process: coordinate " + std::to_string(nu) +
                                   " has no nonzero coefficient");
        }
    }
};

/// Draws J + n shared innovations eps[0..J+n) (J = max_lag(), the first J
/// are pre-sample values) and returns Y_t = sum_j c_j eps[J + t - j],
/// t = 0..n-1. With J equal to an AR(1) burn-in and the same seed this
/// consumes the same innovation sequence as simulate_ar1_panel.
inline ReturnsPanel simulate_linear_process(const LinearProcessSpec& spec) {
    spec.validate();
    const std::size_t lag = spec.max_lag();
    const std::size_t d = spec.dimension();

    RandomStream rng(spec.seed);
    std::vector<double> eps(lag + spec.n);
    for (double& e : eps)
        e = spec.innovation_sd * rng.gaussian();

    Matrix out(static_cast<Eigen::Index>(spec.n), static_cast<Eigen::Index>(d));
    for (std::size_t nu = 0; nu < d; ++nu) {
        const auto& c = spec.coeffs[nu];
        for (std::size_t t = 0; t < spec.n; ++t) {
            double y = 0.0;
            for (std::size_t j = 0; j < c.size(); ++j)
                y += c[j] * eps[lag + t - j];
            out(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(nu)) = y;
        }
    }
    return ReturnsPanel(std::move(out));
}

} // namespace shrinkcov

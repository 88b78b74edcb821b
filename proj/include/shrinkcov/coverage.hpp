#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shrinkcov/cov.hpp"
#include "shrinkcov/longrun.hpp"
#include "shrinkcov/parallel.hpp"
#include "shrinkcov/rng.hpp"
#include "shrinkcov/shrinkage.hpp"
#include "shrinkcov/simulate.hpp"

namespace shrinkcov {

/// Where the true scaled trace comes from: the closed form for stationary
/// AR(1) coordinates, or the Monte Carlo mean of tr*(S) over `truth_runs`
/// extra panels.
enum class TruthMode { analytic, simulated };

struct CoverageConfig {
    /// (n, d) cells.
    std::vector<std::pair<std::size_t, std::size_t>> grid{{10, 10}, {100, 50}, {250, 50}};
    std::size_t replications = 1000;
    double alpha = 0.10;
    KernelKind kernel = KernelKind::truncated;
    /// Fixed lag truncation; default floor(n^0.3) per cell.
    std::optional<std::size_t> lag;
    std::uint64_t master_seed = 20180208;
    TruthMode truth_mode = TruthMode::analytic;
    std::size_t truth_runs = 20000;
    InnovationMode innovations = InnovationMode::shared;
    double innovation_sd = 1.0;
    std::size_t burn_in = 200;
    /// Replaces the true scaled trace (degenerate-case testing).
    std::optional<double> truth_override;
    std::size_t threads = 1;

    void validate() const {
        if (grid.empty())
            throw config_error("coverage: empty (n, d) grid");
        for (const auto& [n, d] : grid)
            if (n < 2 || d < 1)
                throw config_error("coverage: cell (" + std::to_string(n) + ", " +
                                   std::to_string(d) + ") needs n >= 2 and d >= 1");
        if (replications < 1)
            throw config_error("coverage: replications must be >= 1");
        check_alpha(alpha);
        if (truth_mode == TruthMode::simulated && truth_runs < 1)
            throw config_error("coverage: truth_runs must be >= 1");
    }
};

struct CoverageCell {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t m = 0;
    std::size_t replications = 0;
    double truth = 0.0;
    double coverage = 0.0;
    /// sqrt(p (1 - p) / R)
    double std_error = 0.0;
    /// Mean of upper - lower.
    double mean_width = 0.0;
    double clamp_rate = 0.0;
    /// More than half of the replications hit the long-run variance floor.
    bool unreliable = false;
};

struct CoverageReport {
    CoverageConfig config;
    std::vector<CoverageCell> cells;
};

/// Stream tags: replication r of cell c uses derive_seed(master, c, r);
/// truth run k of cell c uses derive_seed(master, c | kTruthStreamBit, k).
inline constexpr std::uint64_t kTruthStreamBit = std::uint64_t{1} << 40;

inline std::uint64_t replication_seed(std::uint64_t master, std::size_t cell, std::size_t rep) {
    return derive_seed(master, cell, rep);
}

inline SimConfig cell_sim_config(const CoverageConfig& config, std::size_t n, std::size_t d,
                                 std::uint64_t seed) {
    SimConfig sim;
    sim.n = n;
    sim.d = d;
    sim.innovations = config.innovations;
    sim.innovation_sd = config.innovation_sd;
    sim.burn_in = config.burn_in;
    sim.seed = seed;
    return sim;
}

inline double cell_truth(const CoverageConfig& config, std::size_t cell, std::size_t n,
                         std::size_t d) {
    if (config.truth_override)
        return *config.truth_override;
    if (config.truth_mode == TruthMode::analytic)
        return true_scaled_trace_ar1(cell_sim_config(config, n, d, 0));

    std::vector<double> draws(config.truth_runs);
    parallel_blocks(draws.size(), config.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const auto seed = derive_seed(config.master_seed, cell | kTruthStreamBit, k);
            const auto panel = simulate_ar1_panel(cell_sim_config(config, n, d, seed));
            draws[k] = panel.data().squaredNorm() / static_cast<double>(n * d);
        }
    });
    double sum = 0.0;
    for (double x : draws)
        sum += x;
    return sum / static_cast<double>(draws.size());
}

/// Monte Carlo coverage of the scaled-trace interval on AR(1) panels with
/// rho_nu = 0.1 + 0.5 nu / d. Replications run in parallel, each on its own
/// substream, and are reduced in index order, so the report depends only on
/// the configuration and not on the thread count.
inline CoverageReport run_coverage_study(const CoverageConfig& config) {
    config.validate();
    CoverageReport report{config, {}};
    for (std::size_t c = 0; c < config.grid.size(); ++c) {
        const auto [n, d] = config.grid[c];
        const std::size_t m = config.lag.value_or(default_lag_truncation(n));
        const KernelSpec kernel(config.kernel, m);
        check_lag(n, kernel.m, "coverage: lag truncation");

        CoverageCell cell;
        cell.n = n;
        cell.d = d;
        cell.m = kernel.m;
        cell.replications = config.replications;
        cell.truth = cell_truth(config, c, n, d);

        const std::size_t reps = config.replications;
        std::vector<unsigned char> hit(reps), clamped(reps);
        std::vector<double> width(reps);
        parallel_blocks(reps, config.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t r = begin; r < end; ++r) {
                const auto seed = replication_seed(config.master_seed, c, r);
                const auto panel = simulate_ar1_panel(cell_sim_config(config, n, d, seed));
                const auto cov = sample_covariance(panel, Centering::none);
                const auto lrv = sigma_tr_sq(panel, kernel, 1);
                const auto ci = trace_confidence_interval(cov, lrv, config.alpha);
                hit[r] = ci.contains(cell.truth) ? 1 : 0;
                clamped[r] = lrv.clamped ? 1 : 0;
                width[r] = ci.upper() - ci.lower();
            }
        });

        std::size_t hits = 0, clamps = 0;
        double width_sum = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            hits += hit[r];
            clamps += clamped[r];
            width_sum += width[r];
        }
        const double R = static_cast<double>(reps);
        cell.coverage = static_cast<double>(hits) / R;
        cell.std_error = std::sqrt(cell.coverage * (1.0 - cell.coverage) / R);
        cell.mean_width = width_sum / R;
        cell.clamp_rate = static_cast<double>(clamps) / R;
        cell.unreliable = cell.clamp_rate > 0.5;
        report.cells.push_back(cell);
    }
    return report;
}

} // namespace shrinkcov

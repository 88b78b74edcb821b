#include <cmath>

#include <gtest/gtest.h>

#include "shrinkcov/coverage.hpp"

using namespace shrinkcov;

TEST(Coverage, ReproducibleAndThreadIndependent) {
    CoverageConfig cfg;
    cfg.grid = {{20, 5}, {30, 8}};
    cfg.replications = 60;
    cfg.master_seed = 42;
    cfg.threads = 1;
    const auto a = run_coverage_study(cfg);
    cfg.threads = 3;
    const auto b = run_coverage_study(cfg);
    ASSERT_EQ(a.cells.size(), 2u);
    for (std::size_t c = 0; c < 2; ++c) {
        EXPECT_EQ(a.cells[c].coverage, b.cells[c].coverage);
        EXPECT_EQ(a.cells[c].mean_width, b.cells[c].mean_width);
        EXPECT_EQ(a.cells[c].clamp_rate, b.cells[c].clamp_rate);
    }
    cfg.master_seed = 43;
    const auto c = run_coverage_study(cfg);
    EXPECT_NE(a.cells[1].mean_width, c.cells[1].mean_width);
}

TEST(Coverage, CellBookkeeping) {
    CoverageConfig cfg;
    cfg.grid = {{100, 10}};
    cfg.replications = 50;
    const auto rep = run_coverage_study(cfg);
    const auto& cell = rep.cells[0];
    EXPECT_EQ(cell.n, 100u);
    EXPECT_EQ(cell.d, 10u);
    EXPECT_EQ(cell.m, 3u);
    EXPECT_EQ(cell.replications, 50u);
    EXPECT_GE(cell.coverage, 0.0);
    EXPECT_LE(cell.coverage, 1.0);
    EXPECT_NEAR(cell.std_error, std::sqrt(cell.coverage * (1 - cell.coverage) / 50.0), 1e-12);
    SimConfig sim;
    sim.d = 10;
    EXPECT_EQ(cell.truth, true_scaled_trace_ar1(sim));
    EXPECT_GT(cell.mean_width, 0.0);
}

TEST(Coverage, DegenerateZeroInnovations) {
    CoverageConfig cfg;
    cfg.grid = {{20, 4}};
    cfg.replications = 25;
    cfg.innovation_sd = 0.0;
    cfg.truth_override = 1.0;
    const auto rep = run_coverage_study(cfg);
    const auto& cell = rep.cells[0];
    EXPECT_EQ(cell.coverage, 0.0);
    EXPECT_EQ(cell.clamp_rate, 1.0);
    EXPECT_TRUE(cell.unreliable);
    EXPECT_LT(cell.mean_width, 1e-5);
}

TEST(Coverage, SimulatedTruthIsCloseToAnalytic) {
    CoverageConfig cfg;
    cfg.grid = {{100, 10}};
    cfg.replications = 10;
    cfg.truth_mode = TruthMode::simulated;
    cfg.truth_runs = 2000;
    const auto rep = run_coverage_study(cfg);
    SimConfig sim;
    sim.d = 10;
    EXPECT_NEAR(rep.cells[0].truth / true_scaled_trace_ar1(sim), 1.0, 0.01);
}

TEST(Coverage, ValidatesConfig) {
    CoverageConfig cfg;
    cfg.replications = 0;
    EXPECT_THROW(run_coverage_study(cfg), Error);
    cfg.replications = 1;
    cfg.alpha = 1.5;
    EXPECT_THROW(run_coverage_study(cfg), Error);
    cfg.alpha = 0.1;
    cfg.grid = {};
    EXPECT_THROW(run_coverage_study(cfg), Error);
    cfg.grid = {{1, 4}};
    EXPECT_THROW(run_coverage_study(cfg), Error);
}

TEST(Coverage, SingleReplicationSmoke) {
    CoverageConfig cfg;
    cfg.grid = {{10, 10}};
    cfg.replications = 1;
    const auto rep = run_coverage_study(cfg);
    EXPECT_TRUE(rep.cells[0].coverage == 0.0 || rep.cells[0].coverage == 1.0);
    EXPECT_EQ(rep.cells[0].std_error, 0.0);
}

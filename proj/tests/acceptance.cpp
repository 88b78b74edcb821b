// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "oracles.hpp"
#include "shrinkcov/commands.hpp"

using namespace shrinkcov;

namespace {

int failures = 0;

void report(bool ok, const std::string& id, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t hardware_threads() {
    return resolve_threads(0, 1u << 20);
}

ReturnsPanel gaussian_panel(std::size_t n, std::size_t d, unsigned seed) {
    return ReturnsPanel(oracle::random_matrix(n, d, seed));
}

void coverage_cells() {
    struct Target {
        std::size_t n, d;
        double centre, tol;
    };
    const Target targets[] = {{100, 50, 0.915, 0.03}, {10, 10, 0.885, 0.04}, {250, 50, 0.935, 0.03}};
    double at10 = 0.0, at250 = 0.0;
    for (const auto& t : targets) {
        CoverageConfig cfg;
        cfg.grid = {{t.n, t.d}};
        cfg.replications = 1000;
        cfg.alpha = 0.10;
        cfg.kernel = KernelKind::truncated;
        cfg.innovations = InnovationMode::shared;
        cfg.threads = hardware_threads();
        const auto t0 = std::chrono::steady_clock::now();
        const auto cell = run_coverage_study(cfg).cells.at(0);
        const double secs = seconds_since(t0);
        const bool ok = std::abs(cell.coverage - t.centre) <= t.tol + 1e-12;
        report(ok, "coverage n=" + std::to_string(t.n) + " d=" + std::to_string(t.d),
               fmt("coverage %.3f (se %.3f), target %.3f +- %.2f", cell.coverage, cell.std_error,
                   t.centre, t.tol) +
                   fmt(", m=%.0f, clamp rate %.3f, %.1f s", static_cast<double>(cell.m),
                       cell.clamp_rate, secs));
        if (t.n == 100)
            report(secs < 300.0, "coverage runtime n=100 d=50",
                   fmt("%.1f s on %.0f thread(s), limit 300 s", secs,
                       static_cast<double>(cfg.threads)));
        if (t.n == 10)
            at10 = cell.coverage;
        if (t.n == 250)
            at250 = cell.coverage;
    }
    report(at250 >= at10, "coverage increases with n",
           fmt("n=250: %.3f, n=10: %.3f", at250, at10));

    const Target large[] = {{10, 250, 0.900, 0.05},  {10, 500, 0.902, 0.05},
                            {100, 250, 0.921, 0.05}, {100, 500, 0.917, 0.05},
                            {250, 250, 0.913, 0.05}, {250, 500, 0.932, 0.05}};
    for (const auto& t : large) {
        CoverageConfig cfg;
        cfg.grid = {{t.n, t.d}};
        cfg.replications = 200;
        cfg.threads = hardware_threads();
        const auto t0 = std::chrono::steady_clock::now();
        const auto cell = run_coverage_study(cfg).cells.at(0);
        report(std::abs(cell.coverage - t.centre) <= t.tol + 1e-12,
               "coverage n=" + std::to_string(t.n) + " d=" + std::to_string(t.d) + " (R=200)",
               fmt("coverage %.3f (se %.3f), target %.3f +- %.2f", cell.coverage, cell.std_error,
                   t.centre, t.tol) +
                   fmt(", %.1f s", seconds_since(t0)));
    }
}

void oracle_equivalence() {
    std::mt19937 gen(11);
    double worst = 0.0;
    for (unsigned k = 0; k < 20; ++k) {
        const std::size_t n = 4 + gen() % 27;
        const std::size_t d = 1 + gen() % 6;
        const std::size_t m = 1 + gen() % 3;
        const auto kind = k % 2 ? KernelKind::bartlett : KernelKind::truncated;
        const KernelSpec kernel(kind, m);
        const auto panel = gaussian_panel(n, d, 100 + k);
        const double engine = sigma_tr_sq(panel, kernel, 4).sigma_tr_sq_raw;
        const double naive = oracle::sigma_tr_sq(panel.data(), static_cast<Eigen::Index>(m),
                                                 [&](Eigen::Index tau) {
                                                     return kernel.weight(static_cast<std::size_t>(tau));
                                                 });
        worst = std::max(worst, std::abs(engine - naive) / std::abs(naive));
    }
    report(worst <= 1e-12, "long-run variance matches naive oracle",
           fmt("20 panels, max relative error %.2e, limit 1e-12", worst));
}

void shift_identity() {
    std::mt19937 gen(12);
    double worst = 0.0;
    bool off_diag_exact = true;
    for (unsigned k = 0; k < 50; ++k) {
        const std::size_t n = 10 + gen() % 90;
        const std::size_t d = 2 + gen() % 30;
        const double w = 0.05 + 0.9 * std::uniform_real_distribution<double>(0, 1)(gen);
        const double alpha = 0.01 + 0.2 * std::uniform_real_distribution<double>(0, 1)(gen);
        const auto panel = gaussian_panel(n, d, 200 + k);
        const auto est = shrink_to_identity(sample_covariance(panel), w);
        const auto lrv = sigma_tr_sq(panel, KernelSpec(KernelKind::truncated, default_lag_truncation(n)));
        const auto b = shrinkage_bounds(est, lrv, alpha);
        const double expected = 2.0 * w * oracle::phi_inverse(1.0 - alpha / 2.0) * lrv.sigma_tr() /
                                std::sqrt(static_cast<double>(n));
        const Vector gap = eigenvalues(b.upper) - eigenvalues(b.lower);
        worst = std::max(worst, (gap.array() - expected).abs().maxCoeff());
        for (Eigen::Index i = 0; i < est.matrix.rows(); ++i)
            for (Eigen::Index j = 0; j < est.matrix.cols(); ++j)
                if (i != j && (b.lower(i, j) != est.matrix(i, j) || b.upper(i, j) != est.matrix(i, j)))
                    off_diag_exact = false;
    }
    report(worst <= 1e-10 && off_diag_exact, "eigenvalue shift identity",
           fmt("50 instances, max deviation %.2e (limit 1e-10), off-diagonal unchanged: ", worst) + (off_diag_exact ? "yes" : "no"));
}

void conditioning() {
    int ok = 0;
    double max_cond = 0.0;
    for (unsigned k = 0; k < 100; ++k) {
        const auto cov = sample_covariance(gaussian_panel(50, 88, 300 + k));
        const auto est = shrink_to_identity(cov, 0.2);
        const Vector ev = eigenvalues(est.matrix);
        const double raw = condition_number(cov.values);
        const double shrunk = condition_number_from(ev);
        if (ev.minCoeff() > 0.0 && shrunk < raw) {
            ++ok;
            max_cond = std::max(max_cond, shrunk);
        }
    }
    report(ok == 100, "shrinkage restores positive definiteness",
           fmt("%.0f/100 panels (n=50, d=88, W=0.2) PD with cond below raw; worst shrunk cond %.1f",
               ok, max_cond));
}

void portfolio_checks() {
    double err = 0.0;
    for (int d : {1, 2, 5, 30}) {
        const auto w = min_variance_weights(Matrix::Identity(d, d));
        err = std::max(err, (w.w.array() - 1.0 / d).abs().maxCoeff());
        err = std::max(err, std::abs(std::sqrt(w.w.squaredNorm()) - 1.0 / std::sqrt(double(d))));
    }
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = 4.0;
    const auto w2 = min_variance_weights(s);
    err = std::max({err, std::abs(w2.w(0) - 0.8), std::abs(w2.w(1) - 0.2),
                    std::abs(w2.w.dot(s * w2.w) - 0.8)});
    report(err <= 1e-10, "portfolio closed forms", fmt("max error %.2e, limit 1e-10", err));

    std::mt19937 gen(13);
    std::normal_distribution<double> g;
    int beaten = 0;
    double sum_err = 0.0;
    for (unsigned k = 0; k < 20; ++k) {
        const std::size_t d = 2 + k % 9;
        const Matrix sigma = oracle::random_spd(d, 400 + k);
        const auto w = min_variance_weights(sigma);
        sum_err = std::max(sum_err, std::abs(w.w.sum() - 1.0));
        const double best = w.w.dot(sigma * w.w);
        for (int r = 0; r < 1000; ++r) {
            Vector v(static_cast<Eigen::Index>(d));
            for (auto& x : v)
                x = g(gen);
            v.array() += (1.0 - v.sum()) / static_cast<double>(d);
            if (v.dot(sigma * v) < best - 1e-12)
                ++beaten;
        }
    }
    report(beaten == 0 && sum_err <= 1e-10, "minimum-variance optimality",
           fmt("20 PD matrices x 1000 feasible portfolios, %.0f beat the optimum, |w'1 - 1| <= %.1e",
               beaten, sum_err));
}

void risk_clamp() {
    const Matrix s = 0.01 * Matrix::Identity(3, 3);
    const ShrinkageEstimate est{s, 0.2, TargetKind::identity, 0.01, 4};
    const auto w = min_variance_weights(est);
    LongRunVariance lrv;
    lrv.sigma_tr_sq = lrv.sigma_tr_sq_raw = 25.0;
    const auto r = portfolio_risk_bounds(est, w, lrv);
    report(r.clamped_lower && r.lower == 0.0 && r.upper > r.risk, "risk lower bound clamp",
           fmt("n=4, risk %.4f, lower %.4f, upper %.4f", r.risk, r.lower, r.upper) +
               (r.clamped_lower ? ", flagged" : ", not flagged"));
}

void determinism() {
    const auto panel = parse_returns_csv(panel_to_csv(gaussian_panel(150, 40, 500)));
    RunConfig rc;
    CoverageConfig cc;
    cc.grid = {{30, 8}, {60, 12}};
    cc.replications = 200;
    std::string est_ref, cov_ref;
    bool same = true;
    for (std::size_t t : {1, 2, 8}) {
        rc.threads = t;
        cc.threads = t;
        const auto e = estimate_report(panel, rc).dump();
        const auto study = run_coverage_study(cc);
        const auto c = coverage_report_json(study).dump() + coverage_csv(study);
        if (est_ref.empty()) {
            est_ref = e;
            cov_ref = c;
        }
        same = same && e == est_ref && c == cov_ref;
    }
    report(same, "thread-count determinism", std::string("estimate and coverage outputs for threads 1, 2, 8 ") +
                                                  (same ? "byte-identical" : "differ"));
}

void univariate_sanity() {
    SimConfig big;
    big.n = 100000;
    big.d = 1;
    big.rho = {0.0};
    big.burn_in = 0;
    big.seed = 600;
    const auto p = simulate_ar1_panel(big);
    const double b = beta_hat_sq(p, 0, 0, KernelSpec(KernelKind::truncated, default_lag_truncation(big.n)));
    report(std::abs(b - 2.0) <= 0.2, "long-run variance of squares, i.i.d. normal",
           fmt("beta^2 = %.4f at n = 100000, target 2 +- 10%%", b));

    const std::size_t reps = 500;
    std::vector<unsigned char> hit(reps);
    parallel_blocks(reps, hardware_threads(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            SimConfig sim;
            sim.n = 10000;
            sim.d = 1;
            sim.rho = {0.0};
            sim.burn_in = 0;
            sim.seed = derive_seed(601, 0, r);
            const auto panel = simulate_ar1_panel(sim);
            const auto lrv = sigma_tr_sq(panel, KernelSpec(KernelKind::truncated, default_lag_truncation(sim.n)));
            hit[r] = trace_confidence_interval(sample_covariance(panel), lrv, 0.10).contains(1.0);
        }
    });
    double cov = 0.0;
    for (auto h : hit)
        cov += h;
    cov /= static_cast<double>(reps);
    report(std::abs(cov - 0.90) <= 0.04, "variance interval coverage, d = 1",
           fmt("%.3f over 500 replications at n = 10000, target 0.90 +- 0.04", cov));
}

void feasibility() {
    struct Shape {
        std::size_t n, d, window;
    };
    for (const Shape s : {Shape{5651, 32, 252}, Shape{63, 88, 63}, Shape{63, 470, 63}}) {
        SimConfig sim;
        sim.n = s.n;
        sim.d = s.d;
        sim.seed = 700 + s.d;
        sim.innovations = InnovationMode::independent;
        const auto panel = simulate_ar1_panel(sim);
        RunConfig rc;
        rc.threads = hardware_threads();
        auto t0 = std::chrono::steady_clock::now();
        const auto lrv = sigma_tr_sq(panel, rc.kernel_for(s.n), rc.threads);
        const double lrv_secs = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        bool ok = std::isfinite(lrv.sigma_tr_sq);
        try {
            estimate_report(panel, rc);
            bounds_report(panel, rc);
            const auto study = portfolio_study(panel, rc, s.window);
            ok = ok && !study.periods.empty();
        } catch (const Error& e) {
            std::printf("  error: %s\n", e.what());
            ok = false;
        }
        const double secs = seconds_since(t0);
        const bool in_time = s.d != 470 || lrv_secs < 120.0;
        report(ok && in_time,
               "pipeline feasibility " + std::to_string(s.n) + "x" + std::to_string(s.d),
               fmt("long-run variance %.2f s, full pipeline %.2f s", lrv_secs, secs) +
                   (s.d == 470 ? " (limit 120 s)" : ""));
    }
}

} // namespace

int main() {
    std::printf("acceptance run, %zu worker thread(s)\n", hardware_threads());
    coverage_cells();
    oracle_equivalence();
    shift_identity();
    conditioning();
    portfolio_checks();
    risk_clamp();
    determinism();
    univariate_sanity();
    feasibility();
    std::printf("%d criterion line(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}

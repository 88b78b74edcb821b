#pragma once

// Report builders behind the `shrinkcov` command line tool. Every report is
// a JSON envelope {version, command, config, results}; the config echo leaves
// out the thread count so that output does not depend on it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shrinkcov/cov.hpp"
#include "shrinkcov/coverage.hpp"
#include "shrinkcov/csv.hpp"
#include "shrinkcov/longrun.hpp"
#include "shrinkcov/portfolio.hpp"
#include "shrinkcov/shrinkage.hpp"

namespace shrinkcov {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportVersion = "1";
inline constexpr std::uint64_t kDefaultSeed = 20180208;

enum class OutputFormat { json, csv };

struct RunConfig {
    double weight = 0.2;
    double alpha = 0.10;
    KernelKind kernel = KernelKind::truncated;
    std::optional<std::size_t> lag;
    Centering centering = Centering::none;
    /// Risk-bound quantile level; default 1 - alpha/2.
    std::optional<double> p_level;
    std::size_t threads = 1;
    std::uint64_t seed = kDefaultSeed;
    OutputFormat format = OutputFormat::json;

    KernelSpec kernel_for(std::size_t n) const {
        return {kernel, lag.value_or(default_lag_truncation(n))};
    }
    double risk_level() const { return p_level.value_or(1.0 - alpha / 2.0); }

    void validate() const {
        check_weight(weight);
        check_alpha(alpha);
        if (p_level && !(*p_level > 0.0 && *p_level < 1.0))
            throw config_error("p-level must lie in (0, 1)");
    }
};

inline const char* to_string(KernelKind k) { return k == KernelKind::truncated ? "truncated" : "bartlett"; }
inline const char* to_string(Centering c) { return c == Centering::none ? "none" : "mean"; }
inline const char* to_string(TruthMode t) { return t == TruthMode::analytic ? "analytic" : "simulated"; }
inline const char* to_string(InnovationMode m) { return m == InnovationMode::shared ? "shared" : "independent"; }

inline KernelKind parse_kernel(const std::string& s) {
    if (s == "truncated") return KernelKind::truncated;
    if (s == "bartlett") return KernelKind::bartlett;
    throw config_error("unknown kernel '" + s + "' (expected truncated or bartlett)");
}

inline TruthMode parse_truth_mode(const std::string& s) {
    if (s == "analytic") return TruthMode::analytic;
    if (s == "simulated") return TruthMode::simulated;
    throw config_error("unknown truth mode '" + s + "' (expected analytic or simulated)");
}

inline InnovationMode parse_innovations(const std::string& s) {
    if (s == "shared") return InnovationMode::shared;
    if (s == "independent") return InnovationMode::independent;
    throw config_error("unknown innovation mode '" + s + "' (expected shared or independent)");
}

/// Infinite or NaN numbers become JSON null.
inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(number_or_null(v(i)));
    return a;
}

inline json run_config_json(const RunConfig& cfg) {
    json j;
    j["weight"] = cfg.weight;
    j["alpha"] = cfg.alpha;
    j["kernel"] = to_string(cfg.kernel);
    j["lag"] = cfg.lag ? json(*cfg.lag) : json(nullptr);
    j["centering"] = to_string(cfg.centering);
    return j;
}

inline json envelope(const char* command, json config, json results) {
    json j;
    j["version"] = kReportVersion;
    j["command"] = command;
    j["config"] = std::move(config);
    j["results"] = std::move(results);
    return j;
}

inline json estimate_report(const ReturnsPanel& panel, const RunConfig& cfg) {
    cfg.validate();
    const auto cov = sample_covariance(panel, cfg.centering);
    const auto kernel = cfg.kernel_for(panel.rows());
    const auto lrv = sigma_tr_sq(panel, kernel, cfg.threads);
    const auto ci = trace_confidence_interval(cov, lrv, cfg.alpha);

    json r;
    r["n"] = panel.rows();
    r["d"] = panel.cols();
    r["m"] = kernel.m;
    r["scaled_trace"] = ci.center;
    r["sigma_tr_sq"] = lrv.sigma_tr_sq;
    r["sigma_tr_sq_raw"] = lrv.sigma_tr_sq_raw;
    r["sigma_tr"] = ci.sigma_tr;
    r["ci"] = {{"lower", ci.lower()}, {"upper", ci.upper()}, {"half_width", ci.half_width},
               {"alpha", ci.alpha}};
    r["clamped"] = lrv.clamped;
    json warnings = json::array();
    if (lrv.clamped)
        warnings.push_back("long-run variance was nonpositive and clamped; interval width is degenerate");
    r["warnings"] = warnings;
    return envelope("estimate", run_config_json(cfg), r);
}

inline json bounds_report(const ReturnsPanel& panel, const RunConfig& cfg) {
    cfg.validate();
    const auto cov = sample_covariance(panel, cfg.centering);
    const auto est = shrink_to_identity(cov, cfg.weight);
    const auto kernel = cfg.kernel_for(panel.rows());
    const auto lrv = sigma_tr_sq(panel, kernel, cfg.threads);
    const auto bounds = shrinkage_bounds(est, lrv, cfg.alpha);

    const Vector raw = eigenvalues(cov.values);
    const Vector shrunk = eigenvalues(est.matrix);
    json r;
    r["n"] = panel.rows();
    r["d"] = panel.cols();
    r["m"] = kernel.m;
    r["scaled_trace"] = est.scaled_trace;
    r["sigma_tr"] = lrv.sigma_tr();
    r["shift"] = bounds.shift;
    r["clamped"] = lrv.clamped;
    r["eigenvalues"] = {{"raw", to_json(raw)},
                        {"shrunk", to_json(shrunk)},
                        {"lower", to_json(eigenvalues(bounds.lower))},
                        {"upper", to_json(eigenvalues(bounds.upper))}};
    r["condition_number"] = {{"raw", number_or_null(condition_number_from(raw))},
                             {"shrunk", number_or_null(condition_number_from(shrunk))}};
    return envelope("bounds", run_config_json(cfg), r);
}

inline RollingStudy portfolio_study(const ReturnsPanel& panel, const RunConfig& cfg,
                                    std::size_t window) {
    cfg.validate();
    RollingStudyConfig rc;
    rc.window = window;
    rc.weight = cfg.weight;
    rc.p_level = cfg.risk_level();
    rc.kernel = cfg.kernel;
    rc.lag = cfg.lag;
    rc.centering = cfg.centering;
    rc.threads = cfg.threads;
    return rolling_portfolio_study(panel, rc);
}

inline json portfolio_report(const RollingStudy& study, const ReturnsPanel& panel,
                             const RunConfig& cfg, std::size_t window) {
    json periods = json::array();
    for (const auto& p : study.periods) {
        periods.push_back({{"period", p.period},
                           {"first_row", p.first_row},
                           {"risk", p.risk.risk},
                           {"lower", p.risk.lower},
                           {"upper", p.risk.upper},
                           {"clamped", p.risk.clamped_lower},
                           {"cond_raw", number_or_null(p.cond_raw)},
                           {"cond_shrunk", number_or_null(p.cond_shrunk)},
                           {"gross_exposure", p.weights.gross_exposure},
                           {"sigma_tr", p.lrv.sigma_tr()},
                           {"lrv_clamped", p.lrv.clamped}});
    }
    json gaps = json::array();
    for (const auto& g : study.gaps)
        gaps.push_back({{"period", g.period}, {"reason", g.reason}});
    json cfg_json = run_config_json(cfg);
    cfg_json["window"] = window;
    cfg_json["p_level"] = cfg.risk_level();
    json r;
    r["n"] = panel.rows();
    r["d"] = panel.cols();
    r["periods"] = periods;
    r["gaps"] = gaps;
    r["discarded_rows"] = study.discarded_rows;
    return envelope("portfolio", cfg_json, r);
}

inline json portfolio_report(const ReturnsPanel& panel, const RunConfig& cfg, std::size_t window) {
    return portfolio_report(portfolio_study(panel, cfg, window), panel, cfg, window);
}

inline std::string portfolio_csv(const RollingStudy& study) {
    std::string out = "period,risk,lower,upper,clamped,cond_raw,cond_shrunk,gross_exposure\n";
    for (const auto& p : study.periods) {
        out += std::to_string(p.period) + ',' + format_double(p.risk.risk) + ',' +
               format_double(p.risk.lower) + ',' + format_double(p.risk.upper) + ',' +
               (p.risk.clamped_lower ? "1" : "0") + ',' + format_double(p.cond_raw) + ',' +
               format_double(p.cond_shrunk) + ',' + format_double(p.weights.gross_exposure) + '\n';
    }
    return out;
}

inline std::string estimate_csv(const json& report) {
    const auto& r = report["results"];
    std::string out = "n,d,m,scaled_trace,sigma_tr,lower,upper,half_width,alpha,clamped\n";
    out += std::to_string(r["n"].get<std::size_t>()) + ',' +
           std::to_string(r["d"].get<std::size_t>()) + ',' +
           std::to_string(r["m"].get<std::size_t>()) + ',' +
           format_double(r["scaled_trace"].get<double>()) + ',' +
           format_double(r["sigma_tr"].get<double>()) + ',' +
           format_double(r["ci"]["lower"].get<double>()) + ',' +
           format_double(r["ci"]["upper"].get<double>()) + ',' +
           format_double(r["ci"]["half_width"].get<double>()) + ',' +
           format_double(r["ci"]["alpha"].get<double>()) + ',' +
           (r["clamped"].get<bool>() ? "1" : "0") + '\n';
    return out;
}

/// Plot-ready eigenvalue table, one row per index (descending order).
inline std::string bounds_csv(const json& report) {
    const auto& ev = report["results"]["eigenvalues"];
    auto cell = [](const json& v) {
        return v.is_null() ? std::string("nan") : format_double(v.get<double>());
    };
    std::string out = "index,raw,shrunk,lower,upper\n";
    for (std::size_t i = 0; i < ev["raw"].size(); ++i)
        out += std::to_string(i) + ',' + cell(ev["raw"][i]) + ',' + cell(ev["shrunk"][i]) + ',' +
               cell(ev["lower"][i]) + ',' + cell(ev["upper"][i]) + '\n';
    return out;
}

/// Reads a coverage configuration. Recognised keys (all optional): grid
/// ([[n, d], ...]), replications, alpha, kernel, lag, seed, truth,
/// truth_runs, innovations, innovation_sd, burn_in.
inline CoverageConfig coverage_config_from_json(const json& j) {
    CoverageConfig c;
    try {
        if (j.contains("grid")) {
            c.grid.clear();
            for (const auto& cell : j.at("grid"))
                c.grid.emplace_back(cell.at(0).get<std::size_t>(), cell.at(1).get<std::size_t>());
        }
        if (j.contains("replications")) c.replications = j.at("replications").get<std::size_t>();
        if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
        if (j.contains("kernel")) c.kernel = parse_kernel(j.at("kernel").get<std::string>());
        if (j.contains("lag") && !j.at("lag").is_null()) c.lag = j.at("lag").get<std::size_t>();
        if (j.contains("seed")) c.master_seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("truth")) c.truth_mode = parse_truth_mode(j.at("truth").get<std::string>());
        if (j.contains("truth_runs")) c.truth_runs = j.at("truth_runs").get<std::size_t>();
        if (j.contains("innovations"))
            c.innovations = parse_innovations(j.at("innovations").get<std::string>());
        if (j.contains("innovation_sd")) c.innovation_sd = j.at("innovation_sd").get<double>();
        if (j.contains("burn_in")) c.burn_in = j.at("burn_in").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("coverage config: ") + e.what());
    }
    c.validate();
    return c;
}

inline json coverage_config_json(const CoverageConfig& c) {
    json grid = json::array();
    for (const auto& [n, d] : c.grid)
        grid.push_back({n, d});
    json j;
    j["grid"] = grid;
    j["replications"] = c.replications;
    j["alpha"] = c.alpha;
    j["kernel"] = to_string(c.kernel);
    j["lag"] = c.lag ? json(*c.lag) : json(nullptr);
    j["seed"] = c.master_seed;
    j["truth"] = to_string(c.truth_mode);
    j["truth_runs"] = c.truth_runs;
    j["innovations"] = to_string(c.innovations);
    j["innovation_sd"] = c.innovation_sd;
    j["burn_in"] = c.burn_in;
    return j;
}

inline json coverage_report_json(const CoverageReport& report) {
    json cells = json::array();
    for (const auto& c : report.cells)
        cells.push_back({{"n", c.n},
                         {"d", c.d},
                         {"m", c.m},
                         {"replications", c.replications},
                         {"truth", c.truth},
                         {"coverage", c.coverage},
                         {"stderr", c.std_error},
                         {"mean_width", c.mean_width},
                         {"clamp_rate", c.clamp_rate},
                         {"unreliable", c.unreliable}});
    return envelope("coverage", coverage_config_json(report.config), {{"cells", cells}});
}

inline std::string coverage_csv(const CoverageReport& report) {
    std::string out = "n,d,coverage,stderr,mean_width,clamp_rate\n";
    for (const auto& c : report.cells)
        out += std::to_string(c.n) + ',' + std::to_string(c.d) + ',' + format_double(c.coverage) +
               ',' + format_double(c.std_error) + ',' + format_double(c.mean_width) + ',' +
               format_double(c.clamp_rate) + '\n';
    return out;
}

} // namespace shrinkcov

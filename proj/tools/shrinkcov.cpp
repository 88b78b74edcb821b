// shrinkcov: command line front end for the shrinkage covariance library.
//
//   shrinkcov estimate  --input returns.csv [--kind prices|returns] ...
//   shrinkcov bounds    --input returns.csv --weight 0.2 --alpha 0.01
//   shrinkcov portfolio --input returns.csv --window 63
//   shrinkcov coverage  [--config cov.json] --out prefix
//   shrinkcov simulate  --n 250 --d 50 --seed 7 --out panel.csv
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shrinkcov/commands.hpp"
#include "shrinkcov/simulate.hpp"

namespace {

using namespace shrinkcov;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw config_error("cannot write '" + path + "'");
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct CommonOptions {
    std::string input;
    std::string kind = "returns";
    std::string kernel = "truncated";
    std::string centering = "none";
    std::string format = "json";
    std::string out;
    std::optional<std::size_t> lag;
    std::optional<double> p_level;
    std::string delimiter = ",";
    bool no_header = false;
    bool drop_missing = false;
    RunConfig run;
};

void add_data_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--input", o.input, "CSV file: rows = time (ascending), columns = assets")
        ->required();
    cmd->add_option("--kind", o.kind, "prices or returns")->check(CLI::IsMember({"prices", "returns"}));
    cmd->add_option("--delimiter", o.delimiter, "field delimiter");
    cmd->add_flag("--no-header", o.no_header, "the file has no header row");
    cmd->add_flag("--drop-missing", o.drop_missing, "drop rows with missing values instead of failing");
}

void add_run_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--weight", o.run.weight, "shrinkage weight W in [0, 1]");
    cmd->add_option("--alpha", o.run.alpha, "1 - confidence level");
    cmd->add_option("--kernel", o.kernel, "lag kernel")->check(CLI::IsMember({"truncated", "bartlett"}));
    cmd->add_option("--lag", o.lag, "lag truncation m (default floor(n^0.3))");
    cmd->add_option("--centering", o.centering, "none or mean")->check(CLI::IsMember({"none", "mean"}));
    cmd->add_option("--threads", o.run.threads, "worker threads (0 = all cores)");
    cmd->add_option("--seed", o.run.seed, "random seed");
    cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out, "output file (default stdout)");
}

RunConfig finish_run_config(const CommonOptions& o) {
    RunConfig cfg = o.run;
    cfg.kernel = parse_kernel(o.kernel);
    cfg.lag = o.lag;
    cfg.centering = o.centering == "mean" ? Centering::mean : Centering::none;
    cfg.format = o.format == "csv" ? OutputFormat::csv : OutputFormat::json;
    cfg.p_level = o.p_level;
    cfg.validate();
    return cfg;
}

ReturnsPanel load_input(const CommonOptions& o) {
    IngestOptions ingest;
    ingest.input_kind = o.kind == "prices" ? InputKind::prices : InputKind::log_returns;
    if (o.delimiter.size() != 1)
        throw config_error("--delimiter must be a single character");
    ingest.delimiter = o.delimiter[0];
    ingest.header = !o.no_header;
    ingest.missing_policy = o.drop_missing ? MissingPolicy::drop_row : MissingPolicy::error;
    return load_returns_csv(o.input, ingest);
}

std::vector<std::pair<std::size_t, std::size_t>> parse_grid(const std::string& text) {
    // "10x10,100x50"
    std::vector<std::pair<std::size_t, std::size_t>> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto x = item.find('x');
        if (x == std::string::npos)
            throw config_error("grid cell '" + item + "' is not of the form NxD");
        try {
            grid.emplace_back(std::stoul(item.substr(0, x)), std::stoul(item.substr(x + 1)));
        } catch (const std::exception&) {
            throw config_error("grid cell '" + item + "' is not of the form NxD");
        }
    }
    return grid;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shrinkage covariance estimation with trace confidence intervals"};
    app.require_subcommand(1);

    CommonOptions est_o, bnd_o, pf_o;
    auto* est = app.add_subcommand("estimate", "scaled trace, its long-run variance and interval");
    add_data_options(est, est_o);
    add_run_options(est, est_o);

    auto* bnd = app.add_subcommand("bounds", "eigenvalues of the shrinkage estimate and its bounds");
    add_data_options(bnd, bnd_o);
    add_run_options(bnd, bnd_o);

    auto* pf = app.add_subcommand("portfolio", "rolling minimum-variance portfolio risk bounds");
    add_data_options(pf, pf_o);
    add_run_options(pf, pf_o);
    std::size_t window = 252;
    pf->add_option("--window", window, "window length in rows (non-overlapping)");
    pf->add_option("--p-level", pf_o.p_level, "quantile level for risk bounds (default 1 - alpha/2)");

    auto* cov = app.add_subcommand("coverage", "Monte Carlo coverage of the trace interval");
    std::string cov_config, cov_out, cov_grid, cov_kernel, cov_truth, cov_innov;
    std::optional<std::size_t> cov_reps, cov_lag, cov_truth_runs;
    std::optional<double> cov_alpha;
    std::optional<std::uint64_t> cov_seed;
    std::size_t cov_threads = 1;
    cov->add_option("--config", cov_config, "JSON configuration file");
    cov->add_option("--grid", cov_grid, "cells as NxD list, e.g. 10x10,100x50");
    cov->add_option("--replications", cov_reps, "replications per cell");
    cov->add_option("--alpha", cov_alpha, "1 - nominal coverage");
    cov->add_option("--kernel", cov_kernel, "lag kernel")->check(CLI::IsMember({"truncated", "bartlett"}));
    cov->add_option("--lag", cov_lag, "fixed lag truncation (default floor(n^0.3))");
    cov->add_option("--truth", cov_truth, "analytic or simulated")->check(CLI::IsMember({"analytic", "simulated"}));
    cov->add_option("--truth-runs", cov_truth_runs, "panels used by simulated truth");
    cov->add_option("--innovations", cov_innov, "shared or independent")->check(CLI::IsMember({"shared", "independent"}));
    cov->add_option("--seed", cov_seed, "master seed");
    cov->add_option("--threads", cov_threads, "worker threads (0 = all cores)");
    cov->add_option("--out", cov_out, "output prefix; writes <prefix>.json and <prefix>.csv");

    auto* sim = app.add_subcommand("simulate", "write a simulated AR(1) panel as CSV");
    SimConfig sim_cfg;
    std::string sim_out, sim_innov = "shared";
    sim_cfg.seed = kDefaultSeed;
    sim->add_option("--n", sim_cfg.n, "rows")->required();
    sim->add_option("--d", sim_cfg.d, "columns")->required();
    sim->add_option("--rho", sim_cfg.rho, "explicit AR coefficients (default 0.1 + 0.5 nu/d)")->delimiter(',');
    sim->add_option("--burn-in", sim_cfg.burn_in, "discarded start-up values");
    sim->add_option("--innovations", sim_innov, "shared or independent")->check(CLI::IsMember({"shared", "independent"}));
    sim->add_option("--seed", sim_cfg.seed, "random seed");
    sim->add_option("--out", sim_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*est) {
            const auto cfg = finish_run_config(est_o);
            const auto report = estimate_report(load_input(est_o), cfg);
            write_text(est_o.out, cfg.format == OutputFormat::csv ? estimate_csv(report) : dump(report));
            for (const auto& w : report["results"]["warnings"])
                std::cerr << "warning: " << w.get<std::string>() << '\n';
        } else if (*bnd) {
            const auto cfg = finish_run_config(bnd_o);
            const auto report = bounds_report(load_input(bnd_o), cfg);
            write_text(bnd_o.out, cfg.format == OutputFormat::csv ? bounds_csv(report) : dump(report));
            if (report["results"]["clamped"].get<bool>())
                std::cerr << "warning: long-run variance was nonpositive and clamped\n";
        } else if (*pf) {
            const auto cfg = finish_run_config(pf_o);
            const auto panel = load_input(pf_o);
            const auto study = portfolio_study(panel, cfg, window);
            if (cfg.format == OutputFormat::csv)
                write_text(pf_o.out, portfolio_csv(study));
            else
                write_text(pf_o.out, dump(portfolio_report(study, panel, cfg, window)));
            for (const auto& g : study.gaps)
                std::cerr << "warning: period " << g.period << " skipped: " << g.reason << '\n';
        } else if (*cov) {
            json file_cfg = json::object();
            if (!cov_config.empty()) {
                std::ifstream in(cov_config);
                if (!in)
                    throw config_error("cannot open '" + cov_config + "'");
                try {
                    file_cfg = json::parse(in);
                } catch (const nlohmann::json::exception& e) {
                    throw config_error(std::string("coverage config: ") + e.what());
                }
            }
            if (!cov_grid.empty()) {
                json grid = json::array();
                for (const auto& [n, d] : parse_grid(cov_grid))
                    grid.push_back({n, d});
                file_cfg["grid"] = grid;
            }
            if (cov_reps) file_cfg["replications"] = *cov_reps;
            if (cov_alpha) file_cfg["alpha"] = *cov_alpha;
            if (!cov_kernel.empty()) file_cfg["kernel"] = cov_kernel;
            if (cov_lag) file_cfg["lag"] = *cov_lag;
            if (!cov_truth.empty()) file_cfg["truth"] = cov_truth;
            if (cov_truth_runs) file_cfg["truth_runs"] = *cov_truth_runs;
            if (!cov_innov.empty()) file_cfg["innovations"] = cov_innov;
            if (cov_seed) file_cfg["seed"] = *cov_seed;
            auto cfg = coverage_config_from_json(file_cfg);
            cfg.threads = cov_threads;
            const auto report = run_coverage_study(cfg);
            if (cov_out.empty()) {
                std::cout << dump(coverage_report_json(report));
            } else {
                write_text(cov_out + ".json", dump(coverage_report_json(report)));
                write_text(cov_out + ".csv", coverage_csv(report));
            }
            for (const auto& c : report.cells)
                if (c.unreliable)
                    std::cerr << "warning: cell (" << c.n << ", " << c.d
                              << ") clamped the long-run variance in more than half of the runs\n";
        } else if (*sim) {
            sim_cfg.innovations = parse_innovations(sim_innov);
            write_text(sim_out, panel_to_csv(simulate_ar1_panel(sim_cfg)));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}

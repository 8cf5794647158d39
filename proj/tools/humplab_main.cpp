// Batch front-end for the double-humped-state toolkit. Four
// subcommands: hunt a realization pool, evolve one entry to a CSV
// trace, analyze a pool into a report, plot trace columns as SVG.
// Links only the C API.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "humplab.h"

namespace {

int report(int code, const std::string& where) {
    std::fprintf(stderr, "humplab: %s: %s\n", where.c_str(), hl_last_error());
    return code;
}

void log_seed(uint64_t seed, int accepted, const char* detail, void* user) {
    bool verbose = *static_cast<bool*>(user);
    if (accepted)
        std::fprintf(stderr, "seed %" PRIu64 ": pair found\n", seed);
    else if (verbose)
        std::fprintf(stderr, "seed %" PRIu64 ": %s\n", seed, detail);
}

struct PoolGuard {
    hl_pool* pool = nullptr;
    ~PoolGuard() { hl_pool_free(pool); }
};
struct PairGuard {
    hl_pair* pair = nullptr;
    ~PairGuard() { hl_pair_free(pair); }
};
struct TraceGuard {
    hl_trace* trace = nullptr;
    ~TraceGuard() { hl_trace_free(trace); }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"double-humped resonant states on a disordered lattice"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads,
                   "worker threads (default: HUMPLAB_THREADS or all cores)");

    // hunt
    auto* hunt = app.add_subcommand("hunt", "collect a pool of tuned realizations");
    uint64_t first_seed = 0;
    int count = 25;
    uint64_t budget = 100000;
    bool verbose = false;
    hl_hunt_options hopt;
    hl_hunt_options_defaults(&hopt);
    double min_gap = 1e-3;  // keeps Rabi periods, and so run times, bounded
    std::string pool_out;
    hunt->add_option("--seed", first_seed, "first seed to try");
    hunt->add_option("--count", count, "pairs to collect")->check(CLI::PositiveNumber);
    hunt->add_option("--size", hopt.size, "lattice sites")->check(CLI::PositiveNumber);
    hunt->add_option("--separation", hopt.separation, "sites between O and P");
    hunt->add_option("--window", hopt.window, "half-width of the hump windows");
    hunt->add_option("--mass-threshold", hopt.mass_threshold,
                     "window mass required of each packet");
    hunt->add_option("--min-gap", min_gap, "reject pairs split by less than this");
    hunt->add_option("--energy-low", hopt.energy_low, "hunt window lower edge");
    hunt->add_option("--energy-high", hopt.energy_high, "hunt window upper edge");
    hunt->add_option("--budget", budget, "max seeds to attempt");
    hunt->add_flag("--verbose", verbose, "log failed seeds too");
    hunt->add_option("--out", pool_out, "pool file to write")->required();

    // evolve
    auto* evolve = app.add_subcommand("evolve", "evolve one pool entry, write a CSV trace");
    std::string pool_in, trace_out;
    int index = 0;
    hl_evolve_options eopt;
    hl_evolve_options_defaults(&eopt);
    evolve->add_option("--pool", pool_in, "pool file")->required();
    evolve->add_option("--index", index, "entry index");
    evolve->add_option("--beta", eopt.beta, "nonlinearity strength");
    evolve->add_option("--dt", eopt.dt, "time step")->check(CLI::PositiveNumber);
    evolve->add_option("--tmax", eopt.t_max, "horizon (default: ten Rabi periods)");
    evolve->add_option("--stride", eopt.stride,
                       "steps between samples (default: ~200 per Rabi period)");
    evolve->add_flag("--broken", eopt.broken, "reset epsilon_P to 0 first");
    evolve->add_option("--trace", trace_out, "CSV file to write")->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "per-entry diagnostics and correlations");
    std::string apool, report_base;
    hl_analyze_options aopt;
    hl_analyze_options_defaults(&aopt);
    analyze->add_option("--pool", apool, "pool file")->required();
    analyze->add_option("--out-report", report_base,
                        "report base path (writes .csv and .json)")->required();
    analyze->add_option("--beta-quarter-tol", aopt.beta_quarter_tol,
                        "bisection tolerance for beta_quarter");

    // plot
    auto* plot = app.add_subcommand("plot", "render trace columns as an SVG");
    std::vector<std::string> traces;
    std::string columns = "m2";
    std::string svg_out;
    plot->add_option("--trace", traces, "trace CSV (repeatable)")->required();
    plot->add_option("--columns", columns, "comma-separated column names");
    plot->add_option("--out", svg_out, "SVG file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : HL_ERR_ARGUMENT;
    }

    if (hunt->parsed()) {
        hopt.min_gap = min_gap;
        PoolGuard guard;
        int rc = hl_hunt_pool(first_seed, count, &hopt, threads, budget,
                              log_seed, &verbose, &guard.pool);
        if (rc != HL_OK) return report(rc, "hunt");
        rc = hl_pool_save(guard.pool, pool_out.c_str());
        if (rc != HL_OK) return report(rc, pool_out);
        std::fprintf(stderr, "wrote %d entries to %s\n",
                     hl_pool_count(guard.pool), pool_out.c_str());
        return 0;
    }

    if (evolve->parsed()) {
        PoolGuard pool;
        int rc = hl_pool_load(pool_in.c_str(), &pool.pool);
        if (rc != HL_OK) return report(rc, pool_in);
        PairGuard pair;
        rc = hl_pair_build(pool.pool, index, &pair.pair);
        if (rc != HL_OK) return report(rc, "entry " + std::to_string(index));
        TraceGuard trace;
        rc = hl_evolve(pair.pair, &eopt, &trace.trace);
        if (rc != HL_OK) return report(rc, "evolve");
        rc = hl_trace_save_csv(trace.trace, trace_out.c_str());
        if (rc != HL_OK) return report(rc, trace_out);
        return 0;
    }

    if (analyze->parsed()) {
        PoolGuard pool;
        int rc = hl_pool_load(apool.c_str(), &pool.pool);
        if (rc != HL_OK) return report(rc, apool);
        aopt.threads = threads;
        rc = hl_analyze_pool(pool.pool, &aopt, report_base.c_str());
        if (rc != HL_OK) return report(rc, "analyze");
        std::fprintf(stderr, "wrote %s.csv and %s.json\n", report_base.c_str(),
                     report_base.c_str());
        return 0;
    }

    // plot
    std::vector<const char*> paths;
    paths.reserve(traces.size());
    for (const auto& t : traces) paths.push_back(t.c_str());
    int rc = hl_plot_traces(paths.data(), static_cast<int>(paths.size()),
                            columns.c_str(), svg_out.c_str());
    if (rc != HL_OK) return report(rc, svg_out);
    return 0;
}

#include "humplab.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "humplab/analyze.hpp"
#include "humplab/errors.hpp"
#include "humplab/hunt.hpp"
#include "humplab/lattice.hpp"
#include "humplab/parallel.hpp"
#include "humplab/pool.hpp"
#include "humplab/propagator.hpp"
#include "humplab/resonance.hpp"
#include "humplab/svg_plot.hpp"
#include "humplab/trace_io.hpp"
#include "humplab/two_mode.hpp"

struct hl_pool {
    humplab::Pool pool;
};
struct hl_pair {
    humplab::HuntedRealization hunted;
};
struct hl_trace {
    humplab::TimeTrace trace;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
int guarded(F&& f) {
    try {
        f();
        return HL_OK;
    } catch (const humplab::Error& e) {
        g_last_error = e.what();
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return HL_ERR_NUMERIC;
    }
}

int fail_argument(const char* what) {
    g_last_error = what;
    return HL_ERR_ARGUMENT;
}

humplab::HuntConfig to_config(const hl_hunt_options& o) {
    humplab::HuntConfig cfg;
    cfg.size = o.size;
    cfg.separation = o.separation;
    cfg.window = o.window;
    cfg.mass_threshold = o.mass_threshold;
    cfg.gap_tolerance = o.gap_tolerance;
    cfg.max_bisection_steps = o.max_bisection_steps;
    cfg.epsilon_low = o.epsilon_low;
    cfg.epsilon_high = o.epsilon_high;
    cfg.energy_low = o.energy_low;
    cfg.energy_high = o.energy_high;
    cfg.min_gap = o.min_gap;
    return cfg;
}

const char* kTraceColumns[] = {"t", "norm", "energy", "m2",
                               "s", "p_O",  "p_P",    "w_mode"};

const std::vector<double>& trace_column(const humplab::TimeTrace& t, int col) {
    switch (col) {
        case 0: return t.times;
        case 1: return t.norm;
        case 2: return t.energy;
        case 3: return t.m2;
        case 4: return t.s;
        case 5: return t.p_O;
        case 6: return t.p_P;
        default: return t.w_mode;
    }
}

std::string path_stem(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    if (name.size() > 4 && name.substr(name.size() - 4) == ".csv")
        name.resize(name.size() - 4);
    return name;
}

} // namespace

extern "C" {

const char* hl_version(void) { return "1.0.0"; }

const char* hl_last_error(void) { return g_last_error.c_str(); }

int hl_resolve_threads(int requested) {
    return humplab::resolve_threads(requested);
}

void hl_hunt_options_defaults(hl_hunt_options* opt) {
    if (!opt) return;
    humplab::HuntConfig cfg;
    opt->size = cfg.size;
    opt->separation = cfg.separation;
    opt->window = cfg.window;
    opt->mass_threshold = cfg.mass_threshold;
    opt->gap_tolerance = cfg.gap_tolerance;
    opt->max_bisection_steps = cfg.max_bisection_steps;
    opt->epsilon_low = cfg.epsilon_low;
    opt->epsilon_high = cfg.epsilon_high;
    opt->energy_low = cfg.energy_low;
    opt->energy_high = cfg.energy_high;
    opt->min_gap = cfg.min_gap;
}

int hl_hunt_pool(uint64_t first_seed, int count, const hl_hunt_options* opt,
                 int threads, uint64_t seed_budget, hl_hunt_log_fn log,
                 void* log_user, hl_pool** out) {
    if (!opt || !out) return fail_argument("hl_hunt_pool: null argument");
    *out = nullptr;
    return guarded([&] {
        humplab::HuntLog logger;
        if (log) {
            logger = [log, log_user](uint64_t seed, bool ok,
                                     const std::string& detail) {
                log(seed, ok ? 1 : 0, detail.c_str(), log_user);
            };
        }
        auto pool = humplab::hunt_pool(first_seed, count, to_config(*opt),
                                       threads,
                                       seed_budget ? seed_budget : 100000,
                                       logger);
        *out = new hl_pool{std::move(pool)};
    });
}

int hl_pool_save(const hl_pool* pool, const char* path) {
    if (!pool || !path) return fail_argument("hl_pool_save: null argument");
    return guarded([&] { humplab::save_pool(pool->pool, path); });
}

int hl_pool_load(const char* path, hl_pool** out) {
    if (!path || !out) return fail_argument("hl_pool_load: null argument");
    *out = nullptr;
    return guarded([&] { *out = new hl_pool{humplab::load_pool(path)}; });
}

int hl_pool_count(const hl_pool* pool) {
    return pool ? static_cast<int>(pool->pool.entries.size()) : 0;
}

int hl_pool_entry_info(const hl_pool* pool, int index, uint64_t* seed,
                       int* size, int* site_O, int* site_P, double* gap) {
    if (!pool) return fail_argument("hl_pool_entry_info: null pool");
    if (index < 0 || index >= static_cast<int>(pool->pool.entries.size()))
        return fail_argument("hl_pool_entry_info: index out of range");
    const auto& e = pool->pool.entries[index];
    if (seed) *seed = e.seed;
    if (size) *size = e.size;
    if (site_O) *site_O = e.site_O;
    if (site_P) *site_P = e.site_P;
    if (gap) *gap = e.gap;
    return HL_OK;
}

void hl_pool_free(hl_pool* pool) { delete pool; }

int hl_pair_build(const hl_pool* pool, int index, hl_pair** out) {
    if (!pool || !out) return fail_argument("hl_pair_build: null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new hl_pair{humplab::rebuild_pair(pool->pool, index)};
    });
}

void hl_pair_free(hl_pair* pair) { delete pair; }

int hl_pair_size(const hl_pair* pair) {
    return pair ? pair->hunted.pair.realization.size : 0;
}

double hl_pair_gap(const hl_pair* pair) {
    return pair ? pair->hunted.pair.gap : 0.0;
}

double hl_pair_rabi_period(const hl_pair* pair) {
    return pair ? pair->hunted.pair.rabi_period() : 0.0;
}

int hl_pair_vector(const hl_pair* pair, int which, double* out, int capacity) {
    if (!pair || !out) return fail_argument("hl_pair_vector: null argument");
    const auto& p = pair->hunted.pair;
    const humplab::Vec* v = nullptr;
    switch (which) {
        case HL_VEC_Y_O: v = &p.y_O; break;
        case HL_VEC_Y_P: v = &p.y_P; break;
        case HL_VEC_PLUS: v = &p.plus_state; break;
        case HL_VEC_MINUS: v = &p.minus_state; break;
        case HL_VEC_EPSILON: v = &p.realization.epsilon; break;
        default: return fail_argument("hl_pair_vector: unknown vector id");
    }
    if (capacity < v->size())
        return fail_argument("hl_pair_vector: buffer too small");
    std::memcpy(out, v->data(), sizeof(double) * v->size());
    return HL_OK;
}

void hl_evolve_options_defaults(hl_evolve_options* opt) {
    if (!opt) return;
    opt->beta = 0.0;
    opt->dt = 0.02;
    opt->t_max = 0.0;
    opt->stride = 0;
    opt->broken = 0;
}

int hl_evolve(const hl_pair* pair, const hl_evolve_options* opt,
              hl_trace** out) {
    if (!pair || !opt || !out) return fail_argument("hl_evolve: null argument");
    *out = nullptr;
    return guarded([&] {
        const auto& hunted = pair->hunted;
        const double rabi = hunted.pair.rabi_period();

        humplab::PropagatorConfig cfg;
        cfg.beta = opt->beta;
        cfg.dt = opt->dt;
        cfg.t_max = opt->t_max > 0.0 ? opt->t_max : 10.0 * rabi;
        cfg.sample_stride =
            opt->stride > 0
                ? opt->stride
                : std::max(1L, std::lround(rabi / (200.0 * cfg.dt)));

        humplab::CVec psi0 = hunted.pair.y_O.cast<humplab::Complex>();
        humplab::TimeTrace trace;
        if (opt->broken) {
            auto broken = humplab::break_realization(hunted.pair.realization);
            auto spec = humplab::diagonalize(broken);
            trace = humplab::evolve(psi0, broken, spec, cfg, &hunted.pair);
        } else {
            trace = humplab::evolve(psi0, hunted.pair.realization,
                                    hunted.spectrum, cfg, &hunted.pair);
        }
        *out = new hl_trace{std::move(trace)};
    });
}

int hl_trace_rows(const hl_trace* trace) {
    return trace ? static_cast<int>(trace->trace.rows()) : 0;
}

int hl_trace_columns(const hl_trace* trace) {
    return trace ? (trace->trace.has_pair ? 8 : 4) : 0;
}

const char* hl_trace_column_name(const hl_trace* trace, int column) {
    if (!trace || column < 0 || column >= hl_trace_columns(trace))
        return nullptr;
    return kTraceColumns[column];
}

int hl_trace_values(const hl_trace* trace, int column, double* out,
                    int capacity) {
    if (!trace || !out) return fail_argument("hl_trace_values: null argument");
    if (column < 0 || column >= hl_trace_columns(trace))
        return fail_argument("hl_trace_values: column out of range");
    const auto& v = trace_column(trace->trace, column);
    if (capacity < static_cast<int>(v.size()))
        return fail_argument("hl_trace_values: buffer too small");
    std::memcpy(out, v.data(), sizeof(double) * v.size());
    return HL_OK;
}

int hl_trace_save_csv(const hl_trace* trace, const char* path) {
    if (!trace || !path) return fail_argument("hl_trace_save_csv: null argument");
    return guarded([&] { humplab::write_trace_csv(trace->trace, path); });
}

void hl_trace_free(hl_trace* trace) { delete trace; }

double hl_rabi_transfer(double delta_e, double t) {
    return humplab::rabi_transfer(delta_e, t);
}

int hl_pair_r_parameter(const hl_pair* pair, double* value, double* inverse,
                        int* divergent) {
    if (!pair) return fail_argument("hl_pair_r_parameter: null pair");
    return guarded([&] {
        auto r = humplab::r_parameter(pair->hunted.pair, pair->hunted.spectrum);
        if (value) *value = r.value;
        if (inverse) *inverse = r.inverse;
        if (divergent) *divergent = r.divergent ? 1 : 0;
    });
}

int hl_pair_beta_quarter(const hl_pair* pair, double beta_hi, double tol,
                         double* out, int* flagged_nonmonotone) {
    if (!pair || !out) return fail_argument("hl_pair_beta_quarter: null argument");
    return guarded([&] {
        auto res = humplab::find_beta_quarter(pair->hunted.pair, 0.0, beta_hi,
                                              tol > 0.0 ? tol : 1e-4);
        *out = res.beta_quarter;
        if (flagged_nonmonotone)
            *flagged_nonmonotone = res.flagged_nonmonotone ? 1 : 0;
    });
}

int hl_pair_beta_c(const hl_pair* pair, double* out, int* status) {
    if (!pair || !out) return fail_argument("hl_pair_beta_c: null argument");
    return guarded([&] {
        auto res = humplab::find_beta_c(pair->hunted.pair, pair->hunted.spectrum);
        *out = res.beta_c;
        if (status) *status = static_cast<int>(res.status);
    });
}

void hl_analyze_options_defaults(hl_analyze_options* opt) {
    if (!opt) return;
    humplab::AnalyzeConfig cfg;
    opt->beta_quarter_tol = cfg.beta_quarter_tol;
    opt->threads = 0;
}

int hl_analyze_pool(const hl_pool* pool, const hl_analyze_options* opt,
                    const char* out_base) {
    if (!pool || !opt || !out_base)
        return fail_argument("hl_analyze_pool: null argument");
    return guarded([&] {
        humplab::AnalyzeConfig cfg;
        cfg.beta_quarter_tol = opt->beta_quarter_tol;
        cfg.threads = opt->threads;
        auto report = humplab::analyze_pool(pool->pool, cfg);
        const std::string base(out_base);
        humplab::write_report_csv(report, base + ".csv");
        humplab::write_report_json(report, base + ".json");
    });
}

int hl_plot_traces(const char* const* trace_paths, int n_traces,
                   const char* columns, const char* out_svg) {
    if (!trace_paths || n_traces < 1 || !columns || !out_svg)
        return fail_argument("hl_plot_traces: null argument");
    return guarded([&] {
        std::vector<std::string> wanted;
        std::string cur;
        for (const char* p = columns;; ++p) {
            if (*p == ',' || *p == '\0') {
                if (!cur.empty()) wanted.push_back(cur);
                cur.clear();
                if (*p == '\0') break;
            } else {
                cur += *p;
            }
        }
        if (wanted.empty())
            throw humplab::ArgumentError("no columns selected");

        std::vector<humplab::PlotSeries> series;
        for (int i = 0; i < n_traces; ++i) {
            auto table = humplab::read_csv(trace_paths[i]);
            const auto* time = table.find("t");
            if (!time)
                throw humplab::ArgumentError(std::string(trace_paths[i]) +
                                             " has no t column");
            for (const auto& name : wanted) {
                const auto* col = table.find(name);
                if (!col) {
                    std::string available;
                    for (const auto& c : table.columns) {
                        if (!available.empty()) available += ", ";
                        available += c;
                    }
                    throw humplab::ArgumentError(
                        "column '" + name + "' not in " + trace_paths[i] +
                        " (available: " + available + ")");
                }
                humplab::PlotSeries s;
                s.label = path_stem(trace_paths[i]) + ":" + name;
                s.x = *time;
                s.y = *col;
                series.push_back(std::move(s));
            }
        }
        humplab::write_svg_plot(series, "t", wanted.size() == 1 ? wanted[0] : "value",
                                out_svg);
    });
}

} // extern "C"

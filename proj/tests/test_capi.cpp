// Exercises the shared-library surface the way an external consumer
// would: only humplab.h, no internal headers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "humplab.h"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("capi_test_" + name) {
        std::filesystem::remove(path);
    }
    ~TempFile() { std::filesystem::remove(path); }
};

hl_hunt_options fixture_options() {
    hl_hunt_options opt;
    hl_hunt_options_defaults(&opt);
    opt.min_gap = 0.02;
    return opt;
}

// One hunted pool shared by the whole binary.
hl_pool* fixture_pool() {
    static hl_pool* pool = nullptr;
    if (!pool) {
        auto opt = fixture_options();
        REQUIRE(hl_hunt_pool(1000, 1, &opt, 1, 0, nullptr, nullptr, &pool) == HL_OK);
        REQUIRE(pool != nullptr);
    }
    return pool;
}

hl_pair* fixture_pair() {
    static hl_pair* pair = nullptr;
    if (!pair)
        REQUIRE(hl_pair_build(fixture_pool(), 0, &pair) == HL_OK);
    return pair;
}

} // namespace

TEST_CASE("version and thread resolution") {
    CHECK(std::strcmp(hl_version(), "1.0.0") == 0);
    CHECK(hl_resolve_threads(3) == 3);
    CHECK(hl_resolve_threads(0) >= 1);

    setenv("HUMPLAB_THREADS", "5", 1);
    CHECK(hl_resolve_threads(0) == 5);
    CHECK(hl_resolve_threads(2) == 2);  // explicit request wins
    unsetenv("HUMPLAB_THREADS");
}

TEST_CASE("option defaults") {
    hl_hunt_options h;
    hl_hunt_options_defaults(&h);
    CHECK(h.size == 128);
    CHECK(h.separation == 25);
    CHECK(h.window == 3);
    CHECK(h.mass_threshold == 0.25);
    CHECK(h.gap_tolerance == 1e-6);
    CHECK(h.max_bisection_steps == 100);
    CHECK(h.epsilon_low == -4.0);
    CHECK(h.epsilon_high == 4.0);
    CHECK(h.min_gap == 0.0);

    hl_evolve_options e;
    hl_evolve_options_defaults(&e);
    CHECK(e.beta == 0.0);
    CHECK(e.dt == 0.02);
    CHECK(e.t_max == 0.0);
    CHECK(e.stride == 0);
    CHECK(e.broken == 0);

    hl_analyze_options a;
    hl_analyze_options_defaults(&a);
    CHECK(a.beta_quarter_tol == 1e-4);
    CHECK(a.threads == 0);
}

TEST_CASE("hunting reports every seed to the log") {
    struct LogState {
        std::vector<uint64_t> seeds;
        int accepted = 0;
    } state;
    auto log = [](uint64_t seed, int accepted, const char* detail, void* user) {
        auto* s = static_cast<LogState*>(user);
        s->seeds.push_back(seed);
        if (accepted) s->accepted += 1;
        CHECK(detail != nullptr);
    };

    auto opt = fixture_options();
    hl_pool* pool = nullptr;
    REQUIRE(hl_hunt_pool(1000, 1, &opt, 1, 0, log, &state, &pool) == HL_OK);
    CHECK(state.accepted == 1);
    REQUIRE_FALSE(state.seeds.empty());
    for (std::size_t k = 0; k < state.seeds.size(); ++k)
        CHECK(state.seeds[k] == 1000 + k);
    hl_pool_free(pool);
}

TEST_CASE("pool handles round trip through the filesystem") {
    hl_pool* pool = fixture_pool();
    REQUIRE(hl_pool_count(pool) == 1);

    uint64_t seed = 0;
    int size = 0, site_O = 0, site_P = 0;
    double gap = 0.0;
    REQUIRE(hl_pool_entry_info(pool, 0, &seed, &size, &site_O, &site_P, &gap) == HL_OK);
    CHECK(seed >= 1000);
    CHECK(size == 128);
    CHECK(site_P == site_O + 25);
    CHECK(gap >= 0.02);

    TempFile f1("pool1.json"), f2("pool2.json");
    REQUIRE(hl_pool_save(pool, f1.path.c_str()) == HL_OK);

    hl_pool* loaded = nullptr;
    REQUIRE(hl_pool_load(f1.path.c_str(), &loaded) == HL_OK);
    REQUIRE(loaded != nullptr);
    CHECK(hl_pool_count(loaded) == 1);
    uint64_t seed2 = 0;
    double gap2 = 0.0;
    REQUIRE(hl_pool_entry_info(loaded, 0, &seed2, nullptr, nullptr, nullptr,
                               &gap2) == HL_OK);
    CHECK(seed2 == seed);
    CHECK(gap2 == gap);

    REQUIRE(hl_pool_save(loaded, f2.path.c_str()) == HL_OK);
    CHECK(slurp(f1.path) == slurp(f2.path));
    hl_pool_free(loaded);

    CHECK(hl_pool_entry_info(pool, 5, &seed, nullptr, nullptr, nullptr, nullptr) ==
          HL_ERR_ARGUMENT);
}

TEST_CASE("pair handles expose the packet geometry") {
    hl_pair* pair = fixture_pair();
    const int n = hl_pair_size(pair);
    REQUIRE(n == 128);
    const double gap = hl_pair_gap(pair);
    CHECK(gap >= 0.02);
    CHECK(hl_pair_rabi_period(pair) ==
          doctest::Approx(2.0 * std::numbers::pi / gap).epsilon(1e-12));

    std::vector<double> y_O(n), y_P(n), plus(n), minus(n), eps(n);
    REQUIRE(hl_pair_vector(pair, HL_VEC_Y_O, y_O.data(), n) == HL_OK);
    REQUIRE(hl_pair_vector(pair, HL_VEC_Y_P, y_P.data(), n) == HL_OK);
    REQUIRE(hl_pair_vector(pair, HL_VEC_PLUS, plus.data(), n) == HL_OK);
    REQUIRE(hl_pair_vector(pair, HL_VEC_MINUS, minus.data(), n) == HL_OK);
    REQUIRE(hl_pair_vector(pair, HL_VEC_EPSILON, eps.data(), n) == HL_OK);

    double nrm = 0, dot = 0, pm = 0;
    for (int k = 0; k < n; ++k) {
        nrm += y_O[k] * y_O[k];
        dot += y_O[k] * y_P[k];
        pm += plus[k] * minus[k];
    }
    CHECK(std::abs(nrm - 1.0) < 1e-12);
    CHECK(std::abs(dot) < 1e-12);
    CHECK(std::abs(pm) < 1e-12);
    for (int k = 0; k < n; ++k)
        CHECK(std::abs(y_O[k] - (plus[k] + minus[k]) / std::sqrt(2.0)) < 1e-12);

    CHECK(hl_pair_vector(pair, HL_VEC_Y_O, y_O.data(), n - 1) == HL_ERR_ARGUMENT);
    CHECK(std::string(hl_last_error()).find("buffer") != std::string::npos);
    CHECK(hl_pair_vector(pair, 77, y_O.data(), n) == HL_ERR_ARGUMENT);

    hl_pair* bad = nullptr;
    CHECK(hl_pair_build(fixture_pool(), 9, &bad) == HL_ERR_ARGUMENT);
    CHECK(bad == nullptr);
}

TEST_CASE("evolution through the C surface is deterministic") {
    hl_pair* pair = fixture_pair();

    hl_evolve_options opt;
    hl_evolve_options_defaults(&opt);
    hl_trace* trace = nullptr;
    REQUIRE(hl_evolve(pair, &opt, &trace) == HL_OK);
    REQUIRE(trace != nullptr);

    const int rows = hl_trace_rows(trace);
    CHECK(rows > 100);
    REQUIRE(hl_trace_columns(trace) == 8);
    CHECK(std::strcmp(hl_trace_column_name(trace, 0), "t") == 0);
    CHECK(std::strcmp(hl_trace_column_name(trace, 5), "p_O") == 0);
    CHECK(std::strcmp(hl_trace_column_name(trace, 7), "w_mode") == 0);
    CHECK(hl_trace_column_name(trace, 8) == nullptr);

    std::vector<double> col(rows);
    REQUIRE(hl_trace_values(trace, 1, col.data(), rows) == HL_OK);
    // Norm drift budget: 1e-10 per t=1e3 of run, rounding-limited.
    const double drift_cap =
        1e-10 * std::max(1.0, hl_pair_rabi_period(pair) / 100.0);
    for (double v : col)
        CHECK(std::abs(v - 1.0) < drift_cap);  // norm column
    REQUIRE(hl_trace_values(trace, 5, col.data(), rows) == HL_OK);
    CHECK(col[0] == doctest::Approx(1.0).epsilon(1e-9));  // starts at O
    REQUIRE(hl_trace_values(trace, 0, col.data(), rows) == HL_OK);
    CHECK(col[0] == 0.0);
    // t_max is rounded to a whole number of steps.
    CHECK(std::abs(col[rows - 1] - 10.0 * hl_pair_rabi_period(pair)) <=
          0.5 * opt.dt + 1e-12);

    CHECK(hl_trace_values(trace, 0, col.data(), rows - 1) == HL_ERR_ARGUMENT);
    CHECK(hl_trace_values(trace, 9, col.data(), rows) == HL_ERR_ARGUMENT);

    TempFile f1("trace1.csv"), f2("trace2.csv");
    REQUIRE(hl_trace_save_csv(trace, f1.path.c_str()) == HL_OK);

    // A fresh pair handle and a rerun must reproduce the file exactly.
    hl_pair* pair2 = nullptr;
    REQUIRE(hl_pair_build(fixture_pool(), 0, &pair2) == HL_OK);
    hl_trace* trace2 = nullptr;
    REQUIRE(hl_evolve(pair2, &opt, &trace2) == HL_OK);
    REQUIRE(hl_trace_save_csv(trace2, f2.path.c_str()) == HL_OK);
    CHECK(slurp(f1.path) == slurp(f2.path));
    hl_trace_free(trace2);
    hl_pair_free(pair2);

    // The broken twin runs on the same clock but different disorder.
    opt.broken = 1;
    hl_trace* broken = nullptr;
    REQUIRE(hl_evolve(pair, &opt, &broken) == HL_OK);
    CHECK(hl_trace_rows(broken) == rows);
    CHECK(hl_trace_columns(broken) == 8);
    hl_trace_free(broken);

    opt.broken = 0;
    opt.dt = -0.5;
    hl_trace* bad = nullptr;
    CHECK(hl_evolve(pair, &opt, &bad) == HL_ERR_ARGUMENT);
    CHECK(bad == nullptr);

    hl_trace_free(trace);
}

TEST_CASE("scalar diagnostics") {
    hl_pair* pair = fixture_pair();

    CHECK(hl_rabi_transfer(0.1, std::numbers::pi / 0.1) ==
          doctest::Approx(1.0).epsilon(1e-12));

    double value = 0, inverse = 0;
    int divergent = -1;
    REQUIRE(hl_pair_r_parameter(pair, &value, &inverse, &divergent) == HL_OK);
    CHECK(divergent == 0);
    CHECK(value > 0.0);
    CHECK(std::isfinite(value));
    CHECK(value * inverse == doctest::Approx(1.0).epsilon(1e-12));

    double bq = 0.0;
    int flagged = -1;
    REQUIRE(hl_pair_beta_quarter(pair, 64.0, 0.05, &bq, &flagged) == HL_OK);
    CHECK(bq > 0.0);
    CHECK(bq < 64.0);
    CHECK((flagged == 0 || flagged == 1));
}

TEST_CASE("beta_c through the C surface") {
    hl_pair* pair = fixture_pair();
    double bc = 0.0;
    int status = -1;
    REQUIRE(hl_pair_beta_c(pair, &bc, &status) == HL_OK);
    CHECK((status == HL_BETA_C_OK || status == HL_BETA_C_BELOW_GRID ||
           status == HL_BETA_C_AT_GRID_MAX));
    if (status == HL_BETA_C_OK) {
        CHECK(bc > 0.0);
        CHECK(bc <= 10.0);
    }
}

TEST_CASE("pool analysis writes both report files") {
    hl_analyze_options opt;
    hl_analyze_options_defaults(&opt);
    opt.beta_quarter_tol = 1e-3;
    opt.threads = 1;

    TempFile csv("report.csv"), json("report.json");
    const std::string base = "capi_test_report";
    REQUIRE(hl_analyze_pool(fixture_pool(), &opt, base.c_str()) == HL_OK);

    std::string text = slurp(csv.path);
    CHECK(text.rfind("index,seed,", 0) == 0);

    auto j = nlohmann::json::parse(slurp(json.path));
    REQUIRE(j.at("entries").size() == 1);
    CHECK(j.at("entries").at(0).at("beta_quarter").get<double>() > 0.0);
    CHECK(j.at("summary").at("correlation_count").get<int>() <= 1);
    CHECK(j.at("summary").at("pearson").is_null());
}

TEST_CASE("plotting traces through the C surface") {
    hl_pair* pair = fixture_pair();
    hl_evolve_options opt;
    hl_evolve_options_defaults(&opt);
    opt.t_max = 2.0 * hl_pair_rabi_period(pair);

    hl_trace* trace = nullptr;
    REQUIRE(hl_evolve(pair, &opt, &trace) == HL_OK);
    TempFile csv("plotsrc.csv"), svg1("plot1.svg"), svg2("plot2.svg");
    REQUIRE(hl_trace_save_csv(trace, csv.path.c_str()) == HL_OK);
    hl_trace_free(trace);

    const char* paths[] = {csv.path.c_str()};
    REQUIRE(hl_plot_traces(paths, 1, "p_O,p_P", svg1.path.c_str()) == HL_OK);
    REQUIRE(hl_plot_traces(paths, 1, "p_O,p_P", svg2.path.c_str()) == HL_OK);
    std::string svg = slurp(svg1.path);
    CHECK(svg == slurp(svg2.path));
    CHECK(svg.find("capi_test_plotsrc:p_O") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);

    CHECK(hl_plot_traces(paths, 1, "does_not_exist", svg1.path.c_str()) ==
          HL_ERR_ARGUMENT);
    std::string err = hl_last_error();
    CHECK(err.find("does_not_exist") != std::string::npos);
    CHECK(err.find("available") != std::string::npos);
    CHECK(hl_plot_traces(paths, 1, "", svg1.path.c_str()) == HL_ERR_ARGUMENT);
    CHECK(hl_plot_traces(nullptr, 1, "p_O", svg1.path.c_str()) == HL_ERR_ARGUMENT);
}

TEST_CASE("error codes map onto failure kinds") {
    hl_pool* out = nullptr;
    CHECK(hl_pool_load("capi_test_no_such_file.json", &out) == HL_ERR_IO);
    CHECK(out == nullptr);
    CHECK(hl_last_error()[0] != '\0');

    CHECK(hl_hunt_pool(1, 1, nullptr, 1, 0, nullptr, nullptr, &out) ==
          HL_ERR_ARGUMENT);

    auto opt = fixture_options();
    opt.mass_threshold = 0.9999;  // unreachable, exhausts the budget
    CHECK(hl_hunt_pool(1, 1, &opt, 1, 4, nullptr, nullptr, &out) == HL_ERR_HUNT);
    CHECK(out == nullptr);

    opt = fixture_options();
    opt.size = -3;
    CHECK(hl_hunt_pool(1, 1, &opt, 1, 0, nullptr, nullptr, &out) ==
          HL_ERR_ARGUMENT);
}

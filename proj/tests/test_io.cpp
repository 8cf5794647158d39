#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "humplab/errors.hpp"
#include "humplab/pool.hpp"
#include "humplab/svg_plot.hpp"
#include "humplab/trace_io.hpp"
#include "test_util.hpp"

using namespace humplab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

std::size_t count_substr(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + needle.size()))
        ++n;
    return n;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("io_test_" + name) {
        fs::remove(path);
    }
    ~TempFile() { fs::remove(path); }
};

const std::string kPoolJson = R"({
  "format_version": 1,
  "hunt": {"size": 4, "separation": 3, "window": 0, "mass_threshold": 0.25, "gap_tolerance": 1e-06, "max_bisection_steps": 100, "epsilon_low": -4, "epsilon_high": 4, "min_gap": 0},
  "entries": [
    {"seed": 7, "size": 2, "site_O": 0, "site_P": 1, "tuned_epsilon_P": 0.5, "gap": 0.1, "hump_mass_O": 1, "hump_mass_P": 1, "epsilon": [0.25, 0.5]}
  ]
}
)";

} // namespace

TEST_CASE("pool survives a save/load/save round trip byte for byte") {
    Pool pool;
    pool.hunt.min_gap = 0.005;
    pool.hunt.mass_threshold = 1.0 / 3.0;

    PoolEntry a;
    a.seed = 123456789012345ULL;
    a.size = 4;
    a.site_O = 0;
    a.site_P = 3;
    a.epsilon.resize(4);
    a.epsilon << 0.1, -1.0 / 3.0, 1e-17, 0.75;
    a.tuned_epsilon_P = a.epsilon[3];
    a.gap = 0.01 + 1e-17;
    a.hump_mass_O = 0.9999999999999999;
    a.hump_mass_P = 0.3333333333333333;
    pool.entries.push_back(a);

    PoolEntry b = a;
    b.seed = 42;
    b.beta_quarter = 0.12345678901234567;
    b.beta_c = std::numbers::pi;
    b.R = 1.0 / 7.0;
    pool.entries.push_back(b);

    TempFile f1("pool_rt1.json"), f2("pool_rt2.json");
    save_pool(pool, f1.path);
    Pool loaded = load_pool(f1.path);

    REQUIRE(loaded.entries.size() == 2);
    CHECK(loaded.format_version == 1);
    CHECK(loaded.hunt.min_gap == pool.hunt.min_gap);
    CHECK(loaded.hunt.mass_threshold == pool.hunt.mass_threshold);
    const auto& la = loaded.entries[0];
    CHECK(la.seed == a.seed);
    CHECK(la.size == a.size);
    CHECK(la.site_O == a.site_O);
    CHECK(la.site_P == a.site_P);
    CHECK(la.tuned_epsilon_P == a.tuned_epsilon_P);
    CHECK(la.gap == a.gap);
    CHECK(la.hump_mass_O == a.hump_mass_O);
    CHECK(la.hump_mass_P == a.hump_mass_P);
    CHECK_FALSE(la.beta_quarter.has_value());
    CHECK_FALSE(la.beta_c.has_value());
    CHECK_FALSE(la.R.has_value());
    for (int n = 0; n < 4; ++n)
        CHECK(la.epsilon[n] == a.epsilon[n]);
    const auto& lb = loaded.entries[1];
    REQUIRE(lb.beta_quarter.has_value());
    REQUIRE(lb.beta_c.has_value());
    REQUIRE(lb.R.has_value());
    CHECK(*lb.beta_quarter == *b.beta_quarter);
    CHECK(*lb.beta_c == *b.beta_c);
    CHECK(*lb.R == *b.R);

    save_pool(loaded, f2.path);
    CHECK(slurp(f1.path) == slurp(f2.path));
}

TEST_CASE("empty pool round trip") {
    Pool pool;
    TempFile f1("pool_empty1.json"), f2("pool_empty2.json");
    save_pool(pool, f1.path);
    Pool loaded = load_pool(f1.path);
    CHECK(loaded.entries.empty());
    save_pool(loaded, f2.path);
    CHECK(slurp(f1.path) == slurp(f2.path));
}

TEST_CASE("pool loader rejects malformed files") {
    TempFile f("pool_bad.json");

    CHECK_THROWS_AS(load_pool("io_test_missing_file.json"), IoError);

    spit(f.path, "this is not json {{");
    CHECK_THROWS_AS(load_pool(f.path), IoError);

    std::string v2 = kPoolJson;
    v2.replace(v2.find("\"format_version\": 1"), 19, "\"format_version\": 2");
    spit(f.path, v2);
    CHECK_THROWS_AS(load_pool(f.path), IoError);

    std::string short_eps = kPoolJson;
    short_eps.replace(short_eps.find("[0.25, 0.5]"), 11, "[0.25]");
    spit(f.path, short_eps);
    CHECK_THROWS_AS(load_pool(f.path), IoError);

    std::string bad_site = kPoolJson;
    bad_site.replace(bad_site.find("\"site_P\": 1"), 11, "\"site_P\": 9");
    spit(f.path, bad_site);
    CHECK_THROWS_AS(load_pool(f.path), IoError);

    std::string mismatch = kPoolJson;
    mismatch.replace(mismatch.find("\"tuned_epsilon_P\": 0.5"), 22,
                     "\"tuned_epsilon_P\": 0.7");
    spit(f.path, mismatch);
    CHECK_THROWS_AS(load_pool(f.path), IoError);

    std::string no_hunt = kPoolJson;
    no_hunt.replace(no_hunt.find("\"hunt\""), 6, "\"chase\"");
    spit(f.path, no_hunt);
    CHECK_THROWS_AS(load_pool(f.path), IoError);

    spit(f.path, kPoolJson);
    CHECK_NOTHROW(load_pool(f.path));
}

TEST_CASE("save_pool refuses non-finite values") {
    Pool pool;
    PoolEntry e;
    e.size = 1;
    e.epsilon.resize(1);
    e.epsilon << 0.0;
    e.gap = std::numeric_limits<double>::infinity();
    pool.entries.push_back(e);
    TempFile f("pool_inf.json");
    CHECK_THROWS_AS(save_pool(pool, f.path), ArgumentError);
}

TEST_CASE("pool entries rebuild into the same pair") {
    const auto& hunted = testutil::hunted_pair(0);
    Pool pool;
    pool.hunt.min_gap = 0.02;
    pool.entries.push_back(make_pool_entry(hunted));

    const auto& e = pool.entries[0];
    CHECK(e.seed == hunted.pair.realization.seed);
    CHECK(e.gap == hunted.pair.gap);
    CHECK(e.tuned_epsilon_P == e.epsilon[e.site_P]);

    TempFile f("pool_rebuild.json");
    save_pool(pool, f.path);
    Pool loaded = load_pool(f.path);
    auto rebuilt = rebuild_pair(loaded, 0);
    CHECK(rebuilt.pair.gap == hunted.pair.gap);
    CHECK(rebuilt.pair.index_plus == hunted.pair.index_plus);
    CHECK((rebuilt.pair.y_O - hunted.pair.y_O).cwiseAbs().maxCoeff() == 0.0);
    CHECK((rebuilt.pair.y_P - hunted.pair.y_P).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(rebuild_pair(loaded, -1), ArgumentError);
    CHECK_THROWS_AS(rebuild_pair(loaded, 1), ArgumentError);
}

TEST_CASE("pool hunting is thread-count independent") {
    HuntConfig cfg;
    cfg.min_gap = 0.02;

    std::vector<std::uint64_t> logged;
    auto log = [&](std::uint64_t seed, bool, const std::string&) {
        logged.push_back(seed);
    };
    Pool serial = hunt_pool(1000, 2, cfg, 1, 100000, log);
    Pool threaded = hunt_pool(1000, 2, cfg, 3);

    TempFile f1("pool_serial.json"), f2("pool_threaded.json");
    save_pool(serial, f1.path);
    save_pool(threaded, f2.path);
    CHECK(slurp(f1.path) == slurp(f2.path));

    REQUIRE(serial.entries.size() == 2);
    CHECK(serial.entries[0].seed >= 1000);
    CHECK(serial.entries[0].seed < serial.entries[1].seed);
    REQUIRE_FALSE(logged.empty());
    for (std::size_t k = 0; k < logged.size(); ++k)
        CHECK(logged[k] == 1000 + k);  // every seed reported once, in order
}

TEST_CASE("pool hunting respects the seed budget") {
    HuntConfig cfg;
    cfg.mass_threshold = 0.9999;  // nothing qualifies
    CHECK_THROWS_AS(hunt_pool(1, 1, cfg, 1, 8), HuntFailure);
    CHECK_THROWS_AS(hunt_pool(1, 0, cfg, 1), ArgumentError);
}

TEST_CASE("trace csv round trip is exact") {
    TimeTrace t;
    t.has_pair = true;
    t.times = {0.0, 0.1, std::numbers::pi};
    t.norm = {1.0, 1e300, 1e-300};
    t.energy = {-2.5, 0.1 + 0.2, 123456789.12345679};
    t.m2 = {0.0, 42.0, 7e-12};
    t.s = {1.0, -1.0, 0.3333333333333333};
    t.p_O = {1.0, 0.0, 0.25};
    t.p_P = {0.0, 1.0, 0.75};
    t.w_mode = {0.0, 1e-16, -1e-16};

    TempFile f("trace_rt.csv");
    write_trace_csv(t, f.path);
    TimeTrace r = read_trace_csv(f.path);
    REQUIRE(r.rows() == 3);
    REQUIRE(r.has_pair);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(r.times[k] == t.times[k]);
        CHECK(r.norm[k] == t.norm[k]);
        CHECK(r.energy[k] == t.energy[k]);
        CHECK(r.m2[k] == t.m2[k]);
        CHECK(r.s[k] == t.s[k]);
        CHECK(r.p_O[k] == t.p_O[k]);
        CHECK(r.p_P[k] == t.p_P[k]);
        CHECK(r.w_mode[k] == t.w_mode[k]);
    }

    std::string text = slurp(f.path);
    CHECK(text.rfind("t,norm,energy,m2,s,p_O,p_P,w_mode\n", 0) == 0);

    TimeTrace bare;
    bare.times = {0.0, 1.0};
    bare.norm = {1.0, 1.0};
    bare.energy = {0.5, 0.5};
    bare.m2 = {2.0, 3.0};
    write_trace_csv(bare, f.path);
    TimeTrace rb = read_trace_csv(f.path);
    CHECK_FALSE(rb.has_pair);
    CHECK(rb.rows() == 2);
    CHECK(rb.m2[1] == 3.0);
    CHECK(slurp(f.path).rfind("t,norm,energy,m2\n", 0) == 0);
}

TEST_CASE("trace writer validates its input") {
    TempFile f("trace_bad.csv");
    TimeTrace t;
    t.times = {0.0, 1.0};
    t.norm = {1.0};  // ragged
    t.energy = {0.0, 0.0};
    t.m2 = {0.0, 0.0};
    CHECK_THROWS_AS(write_trace_csv(t, f.path), ArgumentError);

    t.norm = {1.0, std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_AS(write_trace_csv(t, f.path), ArgumentError);

    t.norm = {1.0, 1.0};
    t.has_pair = true;  // pair columns missing entirely
    CHECK_THROWS_AS(write_trace_csv(t, f.path), ArgumentError);
}

TEST_CASE("csv reader handles general numeric tables") {
    TempFile f("table.csv");
    spit(f.path, "a,b\r\n1,2\r\n\r\n3e2,-4.5e-3\n");
    CsvTable t = read_csv(f.path);
    REQUIRE(t.columns.size() == 2);
    CHECK(t.columns[0] == "a");
    CHECK(t.rows() == 2);
    REQUIRE(t.find("b") != nullptr);
    CHECK((*t.find("b"))[1] == -4.5e-3);
    CHECK(t.find("zz") == nullptr);
    CHECK((*t.find("a"))[1] == 300.0);
}

TEST_CASE("csv reader rejects malformed rows") {
    TempFile f("table_bad.csv");

    CHECK_THROWS_AS(read_csv("io_test_missing.csv"), IoError);

    spit(f.path, "");
    CHECK_THROWS_AS(read_csv(f.path), IoError);

    spit(f.path, "a,b\n1,xx\n");
    CHECK_THROWS_AS(read_csv(f.path), IoError);

    spit(f.path, "a,b\n1 2\n");
    CHECK_THROWS_AS(read_csv(f.path), IoError);

    spit(f.path, "a,b\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(f.path), IoError);

    spit(f.path, "a,b\n1\n");
    CHECK_THROWS_AS(read_csv(f.path), IoError);
}

TEST_CASE("trace reader insists on the trace schema") {
    TempFile f("trace_schema.csv");
    spit(f.path, "t,norm\n0,1\n");
    CHECK_THROWS_AS(read_trace_csv(f.path), IoError);
    spit(f.path, "norm,t,energy,m2\n0,1,2,3\n");
    CHECK_THROWS_AS(read_trace_csv(f.path), IoError);
    spit(f.path, "t,norm,energy,m2,s,p_O,p_P\n0,1,2,3,4,5,6\n");
    CHECK_THROWS_AS(read_trace_csv(f.path), IoError);
}

TEST_CASE("svg plots are deterministic and structured") {
    PlotSeries s1{"tuned & <broken>", {0.0, 1.0, 2.0}, {0.0, 1.0, 0.5}};
    PlotSeries s2{"m2", {0.0, 1.0, 2.0}, {3.0, 2.0, 5.0}};
    TempFile f1("plot1.svg"), f2("plot2.svg");

    write_svg_plot({s1, s2}, "t", "value", f1.path);
    write_svg_plot({s1, s2}, "t", "value", f2.path);
    std::string svg = slurp(f1.path);
    CHECK(svg == slurp(f2.path));

    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(count_substr(svg, "<polyline") == 2);
    CHECK(count_substr(svg, "tuned &amp; &lt;broken&gt;") == 1);
    CHECK(count_substr(svg, "#1f77b4") == 2);  // line and its legend swatch
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("svg handles degenerate ranges") {
    TempFile f("plot_degen.svg");
    // Single point.
    write_svg_plot({{"p", {1.0}, {2.0}}}, "x", "y", f.path);
    CHECK(slurp(f.path).find("<polyline") != std::string::npos);
    // Constant zero line.
    write_svg_plot({{"z", {0.0, 1.0}, {0.0, 0.0}}}, "x", "y", f.path);
    CHECK(!slurp(f.path).empty());
    // One empty series among real ones still legends both.
    write_svg_plot({{"full", {0.0, 1.0}, {1.0, 2.0}}, {"hollow", {}, {}}},
                   "x", "y", f.path);
    std::string svg = slurp(f.path);
    CHECK(count_substr(svg, "<polyline") == 1);
    CHECK(svg.find("hollow") != std::string::npos);
}

TEST_CASE("svg errors happen before the file is touched") {
    TempFile f("plot_err.svg");
    CHECK_THROWS_AS(write_svg_plot({}, "x", "y", f.path), ArgumentError);
    CHECK_FALSE(fs::exists(f.path));

    CHECK_THROWS_AS(write_svg_plot({{"s", {1.0, 2.0}, {1.0}}}, "x", "y", f.path),
                    ArgumentError);
    CHECK_FALSE(fs::exists(f.path));

    CHECK_THROWS_AS(
        write_svg_plot({{"s", {1.0}, {std::numeric_limits<double>::infinity()}}},
                       "x", "y", f.path),
        ArgumentError);
    CHECK_FALSE(fs::exists(f.path));

    CHECK_THROWS_AS(write_svg_plot({{"s", {}, {}}}, "x", "y", f.path),
                    ArgumentError);
    CHECK_FALSE(fs::exists(f.path));
}

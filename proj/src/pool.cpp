#include "humplab/pool.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "humplab/errors.hpp"
#include "humplab/lattice.hpp"
#include "humplab/parallel.hpp"

namespace humplab {

namespace {

std::string fmt(double x) {
    if (!std::isfinite(x))
        throw ArgumentError("refusing to serialize a non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_entry(std::ostream& os, const PoolEntry& e) {
    os << "    {\n";
    os << "      \"seed\": " << e.seed << ",\n";
    os << "      \"size\": " << e.size << ",\n";
    os << "      \"site_O\": " << e.site_O << ",\n";
    os << "      \"site_P\": " << e.site_P << ",\n";
    os << "      \"tuned_epsilon_P\": " << fmt(e.tuned_epsilon_P) << ",\n";
    os << "      \"gap\": " << fmt(e.gap) << ",\n";
    os << "      \"hump_mass_O\": " << fmt(e.hump_mass_O) << ",\n";
    os << "      \"hump_mass_P\": " << fmt(e.hump_mass_P) << ",\n";
    if (e.beta_quarter)
        os << "      \"beta_quarter\": " << fmt(*e.beta_quarter) << ",\n";
    if (e.beta_c)
        os << "      \"beta_c\": " << fmt(*e.beta_c) << ",\n";
    if (e.R)
        os << "      \"R\": " << fmt(*e.R) << ",\n";
    os << "      \"epsilon\": [";
    for (int n = 0; n < e.epsilon.size(); ++n) {
        if (n) os << ", ";
        os << fmt(e.epsilon[n]);
    }
    os << "]\n    }";
}

} // namespace

void save_pool(const Pool& pool, const std::string& path) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"format_version\": " << pool.format_version << ",\n";
    const auto& h = pool.hunt;
    os << "  \"hunt\": {\"size\": " << h.size
       << ", \"separation\": " << h.separation
       << ", \"window\": " << h.window
       << ", \"mass_threshold\": " << fmt(h.mass_threshold)
       << ", \"gap_tolerance\": " << fmt(h.gap_tolerance)
       << ", \"max_bisection_steps\": " << h.max_bisection_steps
       << ", \"epsilon_low\": " << fmt(h.epsilon_low)
       << ", \"epsilon_high\": " << fmt(h.epsilon_high)
       << ", \"min_gap\": " << fmt(h.min_gap) << "},\n";
    os << "  \"entries\": [";
    for (std::size_t i = 0; i < pool.entries.size(); ++i) {
        os << (i ? ",\n" : "\n");
        write_entry(os, pool.entries[i]);
    }
    os << (pool.entries.empty() ? "]\n" : "\n  ]\n") << "}\n";

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << os.str();
    if (!out.flush())
        throw IoError("short write to " + path);
}

Pool load_pool(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": " + e.what());
    }

    try {
        Pool pool;
        pool.format_version = j.at("format_version").get<int>();
        if (pool.format_version != 1)
            throw IoError(path + ": unsupported pool format version " +
                          std::to_string(pool.format_version));
        const auto& h = j.at("hunt");
        pool.hunt.size = h.at("size").get<int>();
        pool.hunt.separation = h.at("separation").get<int>();
        pool.hunt.window = h.at("window").get<int>();
        pool.hunt.mass_threshold = h.at("mass_threshold").get<double>();
        pool.hunt.gap_tolerance = h.at("gap_tolerance").get<double>();
        pool.hunt.max_bisection_steps = h.at("max_bisection_steps").get<int>();
        pool.hunt.epsilon_low = h.at("epsilon_low").get<double>();
        pool.hunt.epsilon_high = h.at("epsilon_high").get<double>();
        pool.hunt.min_gap = h.at("min_gap").get<double>();

        for (const auto& je : j.at("entries")) {
            PoolEntry e;
            e.seed = je.at("seed").get<std::uint64_t>();
            e.size = je.at("size").get<int>();
            e.site_O = je.at("site_O").get<int>();
            e.site_P = je.at("site_P").get<int>();
            e.tuned_epsilon_P = je.at("tuned_epsilon_P").get<double>();
            e.gap = je.at("gap").get<double>();
            e.hump_mass_O = je.at("hump_mass_O").get<double>();
            e.hump_mass_P = je.at("hump_mass_P").get<double>();
            if (je.contains("beta_quarter"))
                e.beta_quarter = je.at("beta_quarter").get<double>();
            if (je.contains("beta_c"))
                e.beta_c = je.at("beta_c").get<double>();
            if (je.contains("R"))
                e.R = je.at("R").get<double>();
            const auto& eps = je.at("epsilon");
            if (static_cast<int>(eps.size()) != e.size)
                throw IoError(path + ": epsilon length does not match size");
            e.epsilon.resize(e.size);
            for (int n = 0; n < e.size; ++n)
                e.epsilon[n] = eps.at(n).get<double>();
            if (e.site_O < 0 || e.site_O >= e.size ||
                e.site_P < 0 || e.site_P >= e.size)
                throw IoError(path + ": marked site outside the chain");
            if (e.epsilon[e.site_P] != e.tuned_epsilon_P)
                throw IoError(path + ": tuned_epsilon_P disagrees with the epsilon array");
            pool.entries.push_back(std::move(e));
        }
        return pool;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
}

PoolEntry make_pool_entry(const HuntedRealization& hunted) {
    const auto& r = hunted.pair.realization;
    PoolEntry e;
    e.seed = r.seed;
    e.size = r.size;
    e.site_O = r.site_O;
    e.site_P = r.site_P;
    e.tuned_epsilon_P = r.epsilon[r.site_P];
    e.epsilon = r.epsilon;
    e.gap = hunted.pair.gap;
    e.hump_mass_O = hunted.pair.hump_mass_O;
    e.hump_mass_P = hunted.pair.hump_mass_P;
    return e;
}

HuntedRealization rebuild_pair(const Pool& pool, int index) {
    if (index < 0 || index >= static_cast<int>(pool.entries.size()))
        throw ArgumentError("pool index " + std::to_string(index) +
                            " out of range (pool has " +
                            std::to_string(pool.entries.size()) + " entries)");
    const PoolEntry& e = pool.entries[index];

    DisorderRealization real;
    real.size = e.size;
    real.seed = e.seed;
    real.site_O = e.site_O;
    real.site_P = e.site_P;
    real.epsilon = e.epsilon;

    HuntConfig cfg = pool.hunt;
    cfg.min_gap = 0.0;
    auto spec = diagonalize(real);
    auto pair = detect_double_hump(spec, real, cfg);
    if (!pair)
        throw HuntFailure("pool entry " + std::to_string(index) +
                          " no longer detects as a double-humped pair");
    return HuntedRealization{std::move(*pair), std::move(spec), {}};
}

Pool hunt_pool(std::uint64_t first_seed, int count, const HuntConfig& cfg,
               int threads, std::uint64_t seed_budget, const HuntLog& log) {
    cfg.validate();
    if (count < 1)
        throw ArgumentError("pool size must be positive");

    const int workers = resolve_threads(threads);
    Pool pool;
    pool.hunt = cfg;
    pool.entries.reserve(count);

    std::uint64_t seed = first_seed;
    std::uint64_t attempted = 0;
    const long block = std::max(16L, 4L * workers);

    while (static_cast<int>(pool.entries.size()) < count) {
        if (attempted >= seed_budget)
            throw HuntFailure("seed budget exhausted: " +
                              std::to_string(pool.entries.size()) + " of " +
                              std::to_string(count) + " pairs after " +
                              std::to_string(attempted) + " seeds");
        const long b = static_cast<long>(
            std::min<std::uint64_t>(block, seed_budget - attempted));
        std::vector<std::optional<HuntedRealization>> found(b);
        std::vector<std::string> reasons(b);
        parallel_for(b, workers, [&](long i) {
            try {
                found[i] = hunt(seed + i, cfg);
            } catch (const HuntFailure& ex) {
                reasons[i] = ex.what();
            }
        });
        for (long i = 0; i < b; ++i) {
            if (static_cast<int>(pool.entries.size()) >= count)
                break;
            if (log)
                log(seed + i, found[i].has_value(), found[i] ? "" : reasons[i]);
            if (found[i])
                pool.entries.push_back(make_pool_entry(*found[i]));
        }
        seed += b;
        attempted += b;
    }
    return pool;
}

} // namespace humplab

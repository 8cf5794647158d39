#include "humplab/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "humplab/errors.hpp"
#include "humplab/parallel.hpp"
#include "humplab/two_mode.hpp"

namespace humplab {

void AnalyzeConfig::validate() const {
    beta_c.validate();
    if (!(beta_quarter_tol > 0.0))
        throw ArgumentError("beta_quarter tolerance must be positive");
    if (!(beta_quarter_hi_limit > 1.0))
        throw ArgumentError("beta_quarter bracket cap must exceed 1");
}

namespace {

std::string fmt(double x) {
    char buf[40];
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* status_name(BetaCStatus s) {
    switch (s) {
        case BetaCStatus::below_grid: return "below_grid";
        case BetaCStatus::at_grid_max: return "at_grid_max";
        default: return "ok";
    }
}

std::vector<double> ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * (i + j) + 1.0;  // average rank for ties
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

} // namespace

double pearson_correlation(const std::vector<double>& a,
                           const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw ArgumentError("correlation needs two samples of equal length >= 2");
    const double n = static_cast<double>(a.size());
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double saa = 0, sbb = 0, sab = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double da = a[k] - ma, db = b[k] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        throw NumericError("correlation undefined for a constant sample");
    return sab / std::sqrt(saa * sbb);
}

double spearman_correlation(const std::vector<double>& a,
                            const std::vector<double>& b) {
    return pearson_correlation(ranks(a), ranks(b));
}

PoolReport analyze_pool(const Pool& pool, const AnalyzeConfig& cfg) {
    cfg.validate();
    if (pool.entries.empty())
        throw ArgumentError("cannot analyze an empty pool");

    const int n = static_cast<int>(pool.entries.size());
    PoolReport report;
    report.entries.resize(n);

    parallel_for(n, resolve_threads(cfg.threads), [&](long i) {
        auto hunted = rebuild_pair(pool, static_cast<int>(i));
        const auto& pair = hunted.pair;

        EntryReport e;
        e.index = static_cast<int>(i);
        e.seed = pool.entries[i].seed;
        e.gap = pair.gap;
        e.r = r_parameter(pair, hunted.spectrum);

        double hi = 1.0;
        while (transfer_fraction(pair, hi) >= 0.25) {
            hi *= 2.0;
            if (hi > cfg.beta_quarter_hi_limit)
                throw NumericError("entry " + std::to_string(i) +
                                   ": transfer fraction never drops below 1/4");
        }
        auto bq = find_beta_quarter(pair, 0.0, hi, cfg.beta_quarter_tol);
        e.beta_quarter = bq.beta_quarter;
        e.beta_quarter_flagged = bq.flagged_nonmonotone;

        auto bc = find_beta_c(pair, hunted.spectrum, cfg.beta_c);
        e.beta_c = bc.beta_c;
        e.beta_c_status = bc.status;
        e.mse_at_beta_c = bc.mse_at_beta_c;
        e.usable = bc.beta_c > bq.beta_quarter;
        report.entries[i] = e;
    });

    std::vector<double> bc, r;
    int usable = 0;
    for (const auto& e : report.entries) {
        if (e.usable) ++usable;
        if (e.r.divergent || e.r.infinite)
            continue;  // flagged in the rows, excluded from correlation
        bc.push_back(e.beta_c);
        r.push_back(e.r.value);
    }
    report.usable_fraction = static_cast<double>(usable) / n;
    report.correlation_count = static_cast<int>(bc.size());
    if (report.correlation_count >= 2) {
        report.pearson = pearson_correlation(bc, r);
        report.spearman = spearman_correlation(bc, r);
        report.correlations_defined = true;
    }
    return report;
}

void write_report_csv(const PoolReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << "index,seed,gap,R,R_inverse,R_divergent,beta_quarter,"
           "beta_quarter_flagged,beta_c,beta_c_status,mse_at_beta_c,usable\n";
    for (const auto& e : report.entries) {
        out << e.index << ',' << e.seed << ',' << fmt(e.gap) << ','
            << fmt(e.r.value) << ',' << fmt(e.r.inverse) << ','
            << (e.r.divergent ? 1 : 0) << ',' << fmt(e.beta_quarter) << ','
            << (e.beta_quarter_flagged ? 1 : 0) << ',' << fmt(e.beta_c) << ','
            << status_name(e.beta_c_status) << ',' << fmt(e.mse_at_beta_c)
            << ',' << (e.usable ? 1 : 0) << '\n';
    }
    if (!out.flush())
        throw IoError("short write to " + path);
}

void write_report_json(const PoolReport& report, const std::string& path) {
    std::ostringstream os;
    os << "{\n  \"entries\": [";
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const auto& e = report.entries[i];
        os << (i ? ",\n" : "\n");
        os << "    {\"index\": " << e.index << ", \"seed\": " << e.seed
           << ", \"gap\": " << fmt(e.gap);
        if (std::isfinite(e.r.value))
            os << ", \"R\": " << fmt(e.r.value);
        if (std::isfinite(e.r.inverse))
            os << ", \"R_inverse\": " << fmt(e.r.inverse);
        os << ", \"R_divergent\": " << (e.r.divergent ? "true" : "false")
           << ", \"beta_quarter\": " << fmt(e.beta_quarter)
           << ", \"beta_quarter_flagged\": "
           << (e.beta_quarter_flagged ? "true" : "false")
           << ", \"beta_c\": " << fmt(e.beta_c) << ", \"beta_c_status\": \""
           << status_name(e.beta_c_status) << "\", \"mse_at_beta_c\": "
           << fmt(e.mse_at_beta_c) << ", \"usable\": "
           << (e.usable ? "true" : "false") << "}";
    }
    os << (report.entries.empty() ? "]" : "\n  ]") << ",\n  \"summary\": {";
    os << "\"entry_count\": " << report.entries.size()
       << ", \"correlation_count\": " << report.correlation_count
       << ", \"usable_fraction\": " << fmt(report.usable_fraction);
    if (report.correlations_defined) {
        os << ", \"pearson\": " << fmt(report.pearson)
           << ", \"spearman\": " << fmt(report.spearman);
    } else {
        os << ", \"pearson\": null, \"spearman\": null";
    }
    os << "}\n}\n";

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << os.str();
    if (!out.flush())
        throw IoError("short write to " + path);
}

} // namespace humplab

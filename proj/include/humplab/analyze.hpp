#pragma once

#include <string>
#include <vector>

#include "humplab/pool.hpp"
#include "humplab/resonance.hpp"

namespace humplab {

struct AnalyzeConfig {
    BetaCConfig beta_c;
    double beta_quarter_tol = 1e-4;
    // The upper bracket for beta_quarter starts at 1 and doubles until
    // the transfer fraction drops below 1/4, up to this cap.
    double beta_quarter_hi_limit = 64.0;
    int threads = 0;

    void validate() const;
};

struct EntryReport {
    int index = 0;
    std::uint64_t seed = 0;
    double gap = 0.0;
    RParameter r;
    double beta_quarter = 0.0;
    bool beta_quarter_flagged = false;
    double beta_c = 0.0;
    BetaCStatus beta_c_status = BetaCStatus::ok;
    double mse_at_beta_c = 0.0;
    bool usable = false;  // the two-mode picture holds past beta_quarter
};

struct PoolReport {
    std::vector<EntryReport> entries;
    // Correlations between beta_c and R over entries with finite R;
    // defined only when at least two such entries exist.
    int correlation_count = 0;
    bool correlations_defined = false;
    double pearson = 0.0;
    double spearman = 0.0;
    double usable_fraction = 0.0;
};

/// Fill beta_quarter, beta_c and R for every pool entry and correlate
/// beta_c against R. Entries fan out to `threads` workers; the result
/// does not depend on the worker count.
PoolReport analyze_pool(const Pool& pool, const AnalyzeConfig& cfg = {});

void write_report_csv(const PoolReport& report, const std::string& path);
void write_report_json(const PoolReport& report, const std::string& path);

double pearson_correlation(const std::vector<double>& a,
                           const std::vector<double>& b);
double spearman_correlation(const std::vector<double>& a,
                            const std::vector<double>& b);

} // namespace humplab

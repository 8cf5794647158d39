#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "humplab/hunt.hpp"
#include "humplab/types.hpp"

namespace humplab {

/// One stored realization. `epsilon` is the tuned disorder (site P
/// already set to tuned_epsilon_P); the optional diagnostics are only
/// present after an analysis pass wrote them back.
struct PoolEntry {
    std::uint64_t seed = 0;
    int size = 0;
    int site_O = 0;
    int site_P = 0;
    double tuned_epsilon_P = 0.0;
    Vec epsilon;
    double gap = 0.0;
    double hump_mass_O = 0.0;
    double hump_mass_P = 0.0;
    std::optional<double> beta_quarter;
    std::optional<double> beta_c;
    std::optional<double> R;
};

struct Pool {
    int format_version = 1;
    HuntConfig hunt;  // knobs the entries were hunted with
    std::vector<PoolEntry> entries;
};

/// Serialize with 17 significant digits so save -> load -> save is
/// byte-identical and doubles round-trip exactly.
void save_pool(const Pool& pool, const std::string& path);
Pool load_pool(const std::string& path);

PoolEntry make_pool_entry(const HuntedRealization& hunted);

/// Re-diagonalize a stored entry and re-run pair detection on it.
/// The gate knobs come from the pool's hunt config with min_gap
/// dropped, so a stored entry is never rejected for its splitting.
HuntedRealization rebuild_pair(const Pool& pool, int index);

using HuntLog = std::function<void(std::uint64_t seed, bool accepted,
                                   const std::string& detail)>;

/// Collect the first `count` seeds (ascending from first_seed) whose
/// hunt succeeds. Seeds are attempted in parallel blocks but the pool
/// content and the log order depend only on the inputs. Throws
/// HuntFailure when seed_budget attempts pass without filling the pool.
Pool hunt_pool(std::uint64_t first_seed, int count, const HuntConfig& cfg,
               int threads = 0, std::uint64_t seed_budget = 100000,
               const HuntLog& log = nullptr);

} // namespace humplab

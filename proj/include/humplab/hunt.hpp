#pragma once

#include <cstdint>
#include <optional>

#include "humplab/types.hpp"

namespace humplab {

/// Probability mass of `v` on sites [site - window, site + window],
/// clipped at the chain edges.
double window_mass(const Vec& v, int site, int window);

struct CandidateState {
    int index = 0;      // position in the ascending spectrum
    double energy = 0.0;
    double mass = 0.0;  // window mass at the probed site
};

/// Eigenstate with the most mass in the window around `site`; equal
/// masses resolve to the lower index.
CandidateState candidate_state(const SpectralDecomposition& spec,
                               int site, int window);

struct TuneResult {
    double epsilon_P = 0.0;
    double residual = 0.0;  // |E_P - E_O| at the returned value
    int iterations = 0;
};

/// Bisect epsilon_P until the level rising from P crosses the O level.
/// The O anchor is the best O-window candidate of the untuned spectrum
/// inside [energy_low, energy_high]. Raising epsilon_P never lowers a
/// sorted eigenvalue, so each level passes the O level at most once and
/// the sorted index of the O state (continued by overlap with its
/// untuned eigenvector) drops by one per completed passage, right at
/// the avoided-crossing character swap. Each trial re-diagonalizes and
/// reads the signed gap to the partner branch of the first passage,
/// which flips sign at the swap while |gap| stays at least the
/// crossing's splitting; the returned residual is that splitting. The
/// bound state formed at P at the lower epsilon bound is the riser that
/// guarantees a passage. Fails if no O anchor qualifies, no localized
/// state forms at P, the epsilon bounds do not straddle the crossing,
/// or the near-degenerate branches at the tuned point shed the P
/// character (top two P-window masses together below the threshold).
TuneResult tune_site_energy(const DisorderRealization& real,
                            const HuntConfig& cfg);

/// Test the top two eigenstates by combined O+P window mass, drawn from
/// states near the hunt's energy window, for the double-hump property.
/// Returns the assembled pair when each eigenstate holds half the mass
/// threshold in both windows (true hybridization), each packet
/// combination peaks inside its own window with at least
/// cfg.mass_threshold there, and the splitting clears cfg.min_gap;
/// empty otherwise.
std::optional<DoubleHumpPair> detect_double_hump(const SpectralDecomposition& spec,
                                                 const DisorderRealization& real,
                                                 const HuntConfig& cfg);

struct HuntedRealization {
    DoubleHumpPair pair;
    SpectralDecomposition spectrum;  // of the tuned realization
    TuneResult tune;
};

/// Full pipeline for one seed: draw, tune epsilon_P, re-diagonalize,
/// detect. Throws HuntFailure when the seed does not yield a pair.
HuntedRealization hunt(std::uint64_t seed, const HuntConfig& cfg);

/// The spreading-experiment control: same realization with the tuned
/// site reset to epsilon_P = 0.
DisorderRealization break_realization(const DisorderRealization& real);

} // namespace humplab

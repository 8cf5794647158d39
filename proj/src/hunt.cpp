#include "humplab/hunt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "humplab/errors.hpp"
#include "humplab/lattice.hpp"

namespace humplab {

double DoubleHumpPair::rabi_period() const {
    return 2.0 * std::numbers::pi / gap;
}

double window_mass(const Vec& v, int site, int window) {
    const int n = static_cast<int>(v.size());
    if (site < 0 || site >= n)
        throw ArgumentError("window site outside the chain");
    const int lo = std::max(0, site - window);
    const int hi = std::min(n - 1, site + window);
    double m = 0.0;
    for (int i = lo; i <= hi; ++i) m += v[i] * v[i];
    return m;
}

CandidateState candidate_state(const SpectralDecomposition& spec,
                               int site, int window) {
    const int n = spec.size();
    if (n == 0)
        throw ArgumentError("empty spectrum");
    CandidateState best{0, spec.energies[0],
                        window_mass(spec.vectors.col(0), site, window)};
    for (int i = 1; i < n; ++i) {
        double m = window_mass(spec.vectors.col(i), site, window);
        if (m > best.mass)
            best = {i, spec.energies[i], m};
    }
    return best;
}

namespace {

// Sum of the two largest window masses at `site` over the whole spectrum.
double top_two_mass(const SpectralDecomposition& spec, int site, int window) {
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < spec.size(); ++i) {
        double m = window_mass(spec.vectors.col(i), site, window);
        if (m > m1) {
            m2 = m1;
            m1 = m;
        } else if (m > m2) {
            m2 = m;
        }
    }
    return m1 + m2;
}

} // namespace

TuneResult tune_site_energy(const DisorderRealization& real,
                            const HuntConfig& cfg) {
    cfg.validate();
    const int P = real.site_P;

    // Anchor on the best O-window state inside the energy window. The
    // bare argmax would almost always land on a band-edge state (their
    // window masses approach 1), but those are so tightly localized
    // that the tunneling splitting across the separation drops to
    // round-off and no usable crossing exists.
    auto spec0 = diagonalize(real);
    int anchor = -1;
    double anchor_mass = 0.0;
    for (int i = 0; i < spec0.size(); ++i) {
        if (spec0.energies[i] < cfg.energy_low ||
            spec0.energies[i] > cfg.energy_high)
            continue;
        double m = window_mass(spec0.vectors.col(i), real.site_O, cfg.window);
        if (m > anchor_mass) {
            anchor_mass = m;
            anchor = i;
        }
    }
    if (anchor < 0)
        throw HuntFailure("no O-window state inside the energy window");
    // At resonance the O packet is this anchor state, so its window
    // mass is what the detection gate will see; bail out early.
    if (anchor_mass < cfg.mass_threshold)
        throw HuntFailure("O candidate in the energy window is too delocalized");
    const Vec psi_O = spec0.vectors.col(anchor);

    // The level pushed up from P has to be followed through the band,
    // where it is a resonance spread over the spectral forest and no
    // mass or overlap argmax identifies it reliably. What survives the
    // forest is counting: raising eps_P only ever raises eigenvalues,
    // so each level passes the O level at most once, and the sorted
    // index of the O state (continued by overlap with its untuned
    // eigenvector, which every competitor is orthogonal to) drops by
    // exactly one at each completed passage. The drop happens at the
    // avoided-crossing character swap, the point of maximal
    // hybridization. The bound state that forms at P at the lower
    // epsilon bound is the structural riser guaranteeing a passage.
    DisorderRealization trial = real;
    trial.epsilon[P] = cfg.epsilon_low;
    auto spec_lo = diagonalize(trial);
    if (candidate_state(spec_lo, P, cfg.window).mass < cfg.mass_threshold)
        throw HuntFailure("no localized candidate at P");

    auto o_index = [&](const SpectralDecomposition& spec) {
        int i_O = 0;
        double ov = -1.0;
        for (int i = 0; i < spec.size(); ++i) {
            double o = std::abs(psi_O.dot(spec.vectors.col(i)));
            if (o > ov) { ov = o; i_O = i; }
        }
        return i_O;
    };
    const int base = o_index(spec_lo);

    // Signed gap to the partner branch of the first passage: the rising
    // level sits below the O state before the swap and above it after,
    // so the sign flips there while |g| is the current branch splitting
    // (it cannot shrink below the avoided-crossing gap).
    const double wide = 2.0 * (cfg.epsilon_high - cfg.epsilon_low);
    auto gap_at = [&](double eps_P) {
        trial.epsilon[P] = eps_P;
        auto spec = diagonalize(trial);
        int i_O = o_index(spec);
        const int n = spec.size();
        if (i_O < base)
            return i_O + 1 < n ? spec.energies[i_O + 1] - spec.energies[i_O]
                               : wide;
        return i_O > 0 ? spec.energies[i_O - 1] - spec.energies[i_O] : -wide;
    };

    double lo = cfg.epsilon_low;
    double hi = cfg.epsilon_high;
    double g_lo = gap_at(lo);
    double g_hi = gap_at(hi);
    if (g_lo > 0.0 || g_hi < 0.0)
        throw HuntFailure("epsilon_P interval does not bracket the crossing");

    TuneResult best{lo, std::abs(g_lo), 0};
    if (std::abs(g_hi) < best.residual) best = {hi, std::abs(g_hi), 0};

    for (int k = 1; k <= cfg.max_bisection_steps; ++k) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            best.iterations = k - 1;  // bracket at floating-point resolution
            break;
        }
        double g = gap_at(mid);
        if (std::abs(g) < best.residual) best = {mid, std::abs(g), k};
        if (best.residual < cfg.gap_tolerance) {
            best.iterations = k;
            break;
        }
        if (g < 0.0)
            lo = mid;
        else
            hi = mid;
        if (k == cfg.max_bisection_steps)
            best.iterations = k;
    }

    // The near-degenerate branches at the tuned point must still hold
    // the P character between them.
    trial.epsilon[P] = best.epsilon_P;
    auto spec_t = diagonalize(trial);
    if (top_two_mass(spec_t, P, cfg.window) < cfg.mass_threshold)
        throw HuntFailure("level tracked at P lost its identity during tuning");
    return best;
}

std::optional<DoubleHumpPair> detect_double_hump(const SpectralDecomposition& spec,
                                                 const DisorderRealization& real,
                                                 const HuntConfig& cfg) {
    const int n = spec.size();
    if (n < 2)
        throw ArgumentError("spectrum too small for a pair");
    const int O = real.site_O;
    const int P = real.site_P;

    // Two largest combined-window masses among states near the hunt's
    // energy window (the margin admits branches pushed out by half the
    // splitting). Band-edge states localized inside either window can
    // carry more mass than the branches themselves and must not
    // compete. Ties keep the lower index.
    const double e_lo = cfg.energy_low - 0.1;
    const double e_hi = cfg.energy_high + 0.1;
    int i1 = -1, i2 = -1;
    double m1 = -1.0, m2 = -1.0;
    for (int i = 0; i < n; ++i) {
        if (spec.energies[i] < e_lo || spec.energies[i] > e_hi)
            continue;
        double m = window_mass(spec.vectors.col(i), O, cfg.window) +
                   window_mass(spec.vectors.col(i), P, cfg.window);
        if (m > m1) {
            i2 = i1; m2 = m1;
            i1 = i; m1 = m;
        } else if (m > m2) {
            i2 = i; m2 = m;
        }
    }
    if (i2 < 0)
        return std::nullopt;

    DoubleHumpPair pair;
    pair.realization = real;
    pair.index_minus = std::min(i1, i2);
    pair.index_plus = std::max(i1, i2);
    pair.energy_minus = spec.energies[pair.index_minus];
    pair.energy_plus = spec.energies[pair.index_plus];
    pair.gap = pair.energy_plus - pair.energy_minus;
    if (!(pair.gap > 0.0) || pair.gap < cfg.min_gap)
        return std::nullopt;

    Vec plus = spec.vectors.col(pair.index_plus);
    Vec minus = spec.vectors.col(pair.index_minus);

    // A hybridized pair state humps at both sites. Two detuned
    // single-well states can pass every packet-level gate (each sign
    // combination then carries half its mass in each window), so
    // require each eigenstate to hold half the packet threshold in
    // both windows.
    const double half_threshold = 0.5 * cfg.mass_threshold;
    if (window_mass(plus, O, cfg.window) < half_threshold ||
        window_mass(plus, P, cfg.window) < half_threshold ||
        window_mass(minus, O, cfg.window) < half_threshold ||
        window_mass(minus, P, cfg.window) < half_threshold)
        return std::nullopt;

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Vec sum = inv_sqrt2 * (plus + minus);
    Vec diff = inv_sqrt2 * (plus - minus);

    // Pick the eigenvector signs that make (plus + minus)/sqrt(2) the
    // packet peaking at O and the difference the packet peaking at P.
    // Flipping the lower state swaps sum and diff. Requiring each
    // packet's peak inside its own window rejects impostor pairs of two
    // unhybridized states, whose combinations peak in the same window.
    auto peaks_at = [&](const Vec& v, int site) {
        return std::abs(localization_center(v) - site) <= cfg.window;
    };
    bool direct = peaks_at(sum, O) && peaks_at(diff, P);
    bool flipped = peaks_at(diff, O) && peaks_at(sum, P);
    if (direct && flipped) {  // overlapping windows; fall back to mass
        flipped = window_mass(diff, O, cfg.window) >
                  window_mass(sum, O, cfg.window);
        direct = !flipped;
    }
    if (!direct && !flipped)
        return std::nullopt;
    if (flipped) {
        minus = -minus;
        std::swap(sum, diff);
    }
    // Global sign: the O packet peaks positive.
    if (sum[localization_center(sum)] < 0.0) {
        plus = -plus;
        minus = -minus;
        sum = -sum;
        diff = -diff;
    }

    pair.hump_mass_O = window_mass(sum, O, cfg.window);
    pair.hump_mass_P = window_mass(diff, P, cfg.window);
    if (pair.hump_mass_O < cfg.mass_threshold ||
        pair.hump_mass_P < cfg.mass_threshold)
        return std::nullopt;

    pair.plus_state = std::move(plus);
    pair.minus_state = std::move(minus);
    pair.phi1 = sum;
    pair.phi2 = diff;
    pair.y_O = std::move(sum);
    pair.y_P = std::move(diff);
    return pair;
}

HuntedRealization hunt(std::uint64_t seed, const HuntConfig& cfg) {
    cfg.validate();
    const int site_O = default_site_O(cfg.size, cfg.separation);
    const int site_P = site_O + cfg.separation;
    auto real = draw_realization(cfg.size, seed, site_O, site_P);

    auto tune = tune_site_energy(real, cfg);
    real.epsilon[site_P] = tune.epsilon_P;
    auto spec = diagonalize(real);
    auto pair = detect_double_hump(spec, real, cfg);
    if (!pair)
        throw HuntFailure("seed " + std::to_string(seed) +
                          ": tuned realization has no double-humped pair");

    return HuntedRealization{std::move(*pair), std::move(spec), tune};
}

DisorderRealization break_realization(const DisorderRealization& real) {
    DisorderRealization broken = real;
    broken.epsilon[broken.site_P] = 0.0;
    return broken;
}

} // namespace humplab

#pragma once

#include "humplab/types.hpp"

namespace humplab {

/// Linear transfer probability sin^2(delta_e * t / 2) of a two-level
/// system split by delta_e.
double rabi_transfer(double delta_e, double t);

struct RParameter {
    double inverse = 0.0;   // sum_i |V_i / (E_O - E_i)| over the rest of the spectrum
    double value = 0.0;     // 1 / inverse
    bool divergent = false; // some |E_O - E_i| < 1e-12: inverse is infinite
    bool infinite = false;  // inverse == 0: no admixture at all
};

/// Perturbative isolation of the O packet against the rest of the
/// spectrum, with V_i = sum_n y_O(n)^3 v_i(n) and the two pair
/// eigenstates excluded from the sum.
RParameter r_parameter(const DoubleHumpPair& pair,
                       const SpectralDecomposition& spec);

struct BetaCConfig {
    double grid_lo = 1e-3;
    double grid_hi = 10.0;
    int grid_points = 60;     // geometric grid
    int refine_steps = 8;     // bisection steps after the first violation
    double mse_threshold = 1e-3;
    double lattice_dt = 0.02; // target step for the lattice runs
    int grid_samples = 512;   // common comparison grid per period
    int max_doublings = 6;    // horizon extensions while hunting the period

    void validate() const;
};

enum class BetaCStatus {
    ok = 0,
    below_grid = 1,   // already off at the smallest grid beta
    at_grid_max = 2,  // still on at the largest grid beta
};

struct BetaCResult {
    double beta_c = 0.0;
    double mse_at_beta_c = 0.0;
    BetaCStatus status = BetaCStatus::ok;
};

/// Mean squared deviation over one two-mode period between the lattice
/// imbalance s(t) and the two-mode u(t), both resampled on the same
/// uniform grid and averaged with the trapezoidal rule.
double two_mode_mse(const DoubleHumpPair& pair, const SpectralDecomposition& spec,
                    double beta, const BetaCConfig& cfg);

/// Largest beta for which the two-mode model still tracks the lattice
/// (MSE below threshold): ascending scan over the geometric grid, stop
/// at the first violation, then bisect between the last good and first
/// bad grid points.
BetaCResult find_beta_c(const DoubleHumpPair& pair,
                        const SpectralDecomposition& spec,
                        const BetaCConfig& cfg = {});

struct SpreadingComparison {
    TimeTrace tuned;   // packet at O on the tuned realization
    TimeTrace broken;  // same packet after resetting epsilon_P to 0
};

/// The disorder-comparison experiment: evolve y_O under the tuned and
/// the broken realization with identical propagator settings.
SpreadingComparison compare_spreading(const DoubleHumpPair& pair,
                                      const SpectralDecomposition& spec,
                                      const PropagatorConfig& cfg);

} // namespace humplab

#pragma once

#include "humplab/types.hpp"

namespace humplab {

/// Project the lattice problem onto the packet basis {phi1, phi2}.
/// The linear parts are matrix elements of H0; the nonlinear parts are
/// beta times the overlap sums S_pq = sum_n phi1_n^p phi2_n^q:
///   omega_i = <phi_i|H0|phi_i> + 2 beta S22      capK = <phi1|H0|phi2>
///   Omega_1 = beta (S40 - 2 S22)                 Omega_2 = beta (S04 - 2 S22)
///   A1 = beta S31    A2 = beta S13    B = beta S22
TwoModeCoefficients compute_coefficients(const DoubleHumpPair& pair, double beta);

/// d(psi1, psi2)/dt of the projected equation with |psi1|^2 + |psi2|^2 = 1.
AmplitudePair amplitude_derivative(const AmplitudePair& a,
                                   const TwoModeCoefficients& c);

/// Torque T(rho) of the Bloch form d(rho)/dt = rho x T, in the
/// (u, v, w) frame of BlochState:
///   T_u = omega1 - omega2 + Omega1 (1+u)/2 - Omega2 (1-u)/2 + (A1 - A2) w
///   T_v = -B v
///   T_w = 2 capK + A1 (1+u) + A2 (1-u) + B w
BlochState bloch_torque(const BlochState& rho, const TwoModeCoefficients& c);

BlochState bloch_from_amplitudes(const AmplitudePair& a);

/// Fixed-step RK4 on the Bloch sphere, no renormalization. Errors out
/// if |rho| drifts from 1 by more than 1e-6 (shrink dt).
BlochTrajectory integrate_bloch(const BlochState& rho0,
                                const TwoModeCoefficients& c,
                                double dt, double t_max,
                                long sample_stride = 1);

/// Fixed-step RK4 on the amplitude equation. Internally integrates in a
/// frame rotating at (omega1 + omega2)/2 and restores the phase on the
/// stored samples, which keeps the step error independent of the large
/// common phase rate.
AmplitudeTrajectory integrate_amplitudes(const AmplitudePair& a0,
                                         const TwoModeCoefficients& c,
                                         double dt, double t_max,
                                         long sample_stride = 1);

struct OscillationMetrics {
    double period = 0.0;
    double transfer_fraction = 0.0;  // max over one period of (1 - u)/2
    double min_u = 0.0;
    bool period_found = false;
};

/// Period = first refined return of rho(t) to rho(0) with matching
/// velocity direction; candidate minima of |rho - rho0|^2 are refined
/// by quadratic interpolation, as is the u extremum behind
/// transfer_fraction. Returns period_found = false when the trajectory
/// never comes back within the integrated horizon.
OscillationMetrics oscillation_metrics(const BlochTrajectory& traj,
                                       const TwoModeCoefficients& c);

/// Peak transfer fraction f(beta) for the packet started at O, with the
/// integration horizon extended automatically until a period is found.
/// Throws PeriodNotFound if none shows up within `max_doublings`
/// extensions.
double transfer_fraction(const DoubleHumpPair& pair, double beta,
                         int max_doublings = 6);

/// Same search, but starting from explicit coefficients instead of a
/// hunted pair. Initial state is the packet at O (u = 1).
OscillationMetrics packet_metrics(const TwoModeCoefficients& c,
                                  int max_doublings = 6);

struct BetaQuarterResult {
    double beta_quarter = 0.0;
    double transfer_at_result = 0.0;
    // Set when f - 1/4 changes sign more than once on the coarse scan;
    // the result then comes from a dense scan instead of bisection.
    bool flagged_nonmonotone = false;
};

/// Largest beta in [beta_lo, beta_hi] with f(beta) >= 1/4, located by
/// bisection to within `tol` after a coarse monotonicity scan. The
/// bracket must satisfy f(beta_lo) >= 1/4 > f(beta_hi).
BetaQuarterResult find_beta_quarter(const DoubleHumpPair& pair,
                                    double beta_lo, double beta_hi,
                                    double tol = 1e-4);

} // namespace humplab

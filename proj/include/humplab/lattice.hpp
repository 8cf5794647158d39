#pragma once

#include <cstdint>
#include <span>

#include "humplab/types.hpp"

namespace humplab {

/// Draw the site energies for one realization: mt19937_64 seeded with
/// `seed`, one draw per site in ascending site order, each 64-bit word
/// mapped to [0,1) via (x >> 11) * 2^-53 and then to [-2, 2).
DisorderRealization draw_realization(int size, std::uint64_t seed,
                                     int site_O, int site_P);

/// H psi for the hard-wall chain: (H psi)_n = -psi_{n-1} - psi_{n+1}
/// + epsilon_n psi_n, with missing neighbours dropped at the edges.
CVec apply_hamiltonian(const DisorderRealization& real, const CVec& psi);
Vec apply_hamiltonian(const DisorderRealization& real, const Vec& psi);

/// Dense diagonalization of the tridiagonal Hamiltonian. Eigenvalues
/// ascending, eigenvectors orthonormal with the center-positive sign
/// convention.
SpectralDecomposition diagonalize(const DisorderRealization& real);

/// Site index of max |v_n|; ties resolve to the lower index.
int localization_center(const Vec& v);

struct EnergyWindow {
    double lo = 0.0;
    double hi = 0.0;
};

struct LocalizationFit {
    double xi = 0.0;       // localization length, -1/slope
    double slope = 0.0;    // of log|v_n| against |n - center|
    double intercept = 0.0;
    std::size_t points = 0;
};

/// Least-squares decay fit over all eigenstates of `specs` whose energy
/// falls in `window`. Sites within `boundary_margin` of either edge and
/// amplitudes at or below `amplitude_floor` are excluded.
LocalizationFit fit_localization_length(std::span<const SpectralDecomposition> specs,
                                        EnergyWindow window,
                                        int boundary_margin = 10,
                                        double amplitude_floor = 1e-12);

/// Convenience wrapper: draws `count` realizations at seeds first_seed,
/// first_seed + 1, ... and fits the band-center decay length.
LocalizationFit estimate_localization_length(int count, std::uint64_t first_seed,
                                             int size, EnergyWindow window);

} // namespace humplab

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace humplab {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;

/// One disorder realization of the lattice: i.i.d. site energies on [-2, 2]
/// plus the two marked sites O and P that the hump pair lives on.
struct DisorderRealization {
    int size = 0;
    Vec epsilon;
    std::uint64_t seed = 0;
    int site_O = 0;
    int site_P = 0;
};

/// Full eigensystem of the linear (beta = 0) Hamiltonian with hard-wall
/// boundaries. Energies ascending; column i of `vectors` is eigenstate i,
/// its sign fixed so the component at the localization center is positive.
struct SpectralDecomposition {
    Vec energies;
    Mat vectors;
    std::vector<int> centers;

    int size() const { return static_cast<int>(energies.size()); }
};

/// A tuned realization hosting a resonant pair of eigenstates whose
/// symmetric / antisymmetric combinations are single humps at O and P.
///
/// plus_state is the higher-energy member of the pair, so in the
/// {y_O, y_P} basis the linear Hamiltonian is [[E_mean, gap/2],
/// [gap/2, E_mean]] with a positive off-diagonal element.
/// Eigenvector signs are chosen so that phi1 = (plus + minus)/sqrt(2)
/// is the packet concentrated at O with positive peak amplitude, and
/// phi2 = (plus - minus)/sqrt(2) the packet at P. y_O and y_P are kept
/// as named copies of phi1 and phi2.
struct DoubleHumpPair {
    DisorderRealization realization;
    Vec plus_state;
    Vec minus_state;
    double energy_plus = 0.0;
    double energy_minus = 0.0;
    double gap = 0.0;
    int index_plus = 0;
    int index_minus = 0;
    Vec phi1;
    Vec phi2;
    Vec y_O;
    Vec y_P;
    double hump_mass_O = 0.0;
    double hump_mass_P = 0.0;

    double mean_energy() const { return 0.5 * (energy_plus + energy_minus); }
    double rabi_period() const;
};

/// Knobs for the pair hunt. Defaults reproduce the standard setup:
/// 128 sites, O and P separated by 25 sites and centered in the chain,
/// +-3 site windows, a quarter of the norm required in each window.
struct HuntConfig {
    int size = 128;
    int separation = 25;
    int window = 3;
    double mass_threshold = 0.25;
    double gap_tolerance = 1e-6;
    int max_bisection_steps = 100;
    double epsilon_low = -4.0;
    double epsilon_high = 4.0;
    // Hunt only pairs whose energy falls in this band-center window.
    // The localization length peaks at the band center and shrinks
    // toward the edges, so edge states tunnel orders of magnitude more
    // weakly across the same separation and their tuned splittings are
    // too small to resolve or to evolve through a Rabi cycle.
    double energy_low = -0.5;
    double energy_high = 0.5;
    // Reject pairs split by less than this. Zero accepts everything;
    // the CLI raises it so downstream runs (which scale with the Rabi
    // period 2*pi/gap) stay bounded.
    double min_gap = 0.0;

    void validate() const;
};

int default_site_O(int size, int separation);

struct PropagatorConfig {
    double dt = 0.02;
    double t_max = 0.0;
    long sample_stride = 1;
    double beta = 0.0;

    void validate() const;
};

/// Sampled observables of a lattice evolution. `s`, `p_O`, `p_P` and
/// `w_mode` are only filled when the run was given a hump pair to
/// project on (has_pair). w_mode is the population difference of the
/// two pair eigenmodes, constant in the linear problem.
struct TimeTrace {
    std::vector<double> times;
    std::vector<double> norm;
    std::vector<double> energy;
    std::vector<double> m2;
    std::vector<double> s;
    std::vector<double> p_O;
    std::vector<double> p_P;
    std::vector<double> w_mode;
    bool has_pair = false;

    std::size_t rows() const { return times.size(); }
};

/// Coefficients of the two-mode reduction in the packet basis {phi1, phi2}.
/// All of them except capK carry the beta-linear nonlinear corrections;
/// capK is the bare tunneling element (gap/2 for an exact pair).
struct TwoModeCoefficients {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double capK = 0.0;
    double Omega1 = 0.0;
    double Omega2 = 0.0;
    double A1 = 0.0;
    double A2 = 0.0;
    double B = 0.0;
};

struct AmplitudePair {
    Complex psi1{0.0, 0.0};
    Complex psi2{0.0, 0.0};
};

/// Bloch vector of the two-mode system:
///   u = |psi1|^2 - |psi2|^2   (site-packet imbalance, +1 at O)
///   v = 2 Im(conj(psi1) psi2)
///   w = 2 Re(psi1 conj(psi2))
struct BlochState {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
};

struct BlochTrajectory {
    std::vector<double> times;
    std::vector<BlochState> states;
    double max_norm_deviation = 0.0;
};

struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<AmplitudePair> states;
};

} // namespace humplab

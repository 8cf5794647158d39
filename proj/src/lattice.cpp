#include "humplab/lattice.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "humplab/errors.hpp"

namespace humplab {

int default_site_O(int size, int separation) {
    return (size - separation + 1) / 2;
}

void HuntConfig::validate() const {
    if (size < 8)
        throw ArgumentError("lattice size must be at least 8");
    if (separation < 1 || separation >= size)
        throw ArgumentError("site separation must lie inside the chain");
    if (window < 0 || 2 * window + 1 > size)
        throw ArgumentError("window half-width out of range");
    if (!(mass_threshold > 0.0) || mass_threshold > 1.0)
        throw ArgumentError("mass threshold must be in (0, 1]");
    if (!(gap_tolerance > 0.0))
        throw ArgumentError("gap tolerance must be positive");
    if (max_bisection_steps < 1)
        throw ArgumentError("need at least one bisection step");
    if (!(epsilon_low < epsilon_high))
        throw ArgumentError("epsilon search interval is empty");
    if (!(energy_low < energy_high))
        throw ArgumentError("energy window is empty");
    if (min_gap < 0.0)
        throw ArgumentError("min gap must be non-negative");
    int site_O = default_site_O(size, separation);
    if (site_O - window < 0 || site_O + separation + window >= size)
        throw ArgumentError("windows around O and P do not fit in the chain");
}

DisorderRealization draw_realization(int size, std::uint64_t seed,
                                     int site_O, int site_P) {
    if (size < 2)
        throw ArgumentError("lattice size must be at least 2");
    if (site_O < 0 || site_O >= size || site_P < 0 || site_P >= size)
        throw ArgumentError("marked site outside the chain");
    if (site_O == site_P)
        throw ArgumentError("sites O and P must differ");

    DisorderRealization real;
    real.size = size;
    real.seed = seed;
    real.site_O = site_O;
    real.site_P = site_P;
    real.epsilon.resize(size);

    std::mt19937_64 gen(seed);
    for (int n = 0; n < size; ++n) {
        double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        real.epsilon[n] = -2.0 + 4.0 * u;
    }
    return real;
}

namespace {

template <typename Vector>
Vector apply_h0(const DisorderRealization& real, const Vector& psi) {
    const int n = real.size;
    if (psi.size() != n)
        throw ArgumentError("state size does not match the lattice");
    Vector out(n);
    for (int i = 0; i < n; ++i) {
        auto acc = real.epsilon[i] * psi[i];
        if (i > 0) acc -= psi[i - 1];
        if (i + 1 < n) acc -= psi[i + 1];
        out[i] = acc;
    }
    return out;
}

} // namespace

CVec apply_hamiltonian(const DisorderRealization& real, const CVec& psi) {
    return apply_h0(real, psi);
}

Vec apply_hamiltonian(const DisorderRealization& real, const Vec& psi) {
    return apply_h0(real, psi);
}

int localization_center(const Vec& v) {
    if (v.size() == 0)
        throw ArgumentError("empty vector has no localization center");
    int best = 0;
    double best_a = std::abs(v[0]);
    for (int n = 1; n < v.size(); ++n) {
        double a = std::abs(v[n]);
        if (a > best_a) {
            best_a = a;
            best = n;
        }
    }
    if (best_a == 0.0)
        throw ArgumentError("zero vector has no localization center");
    return best;
}

SpectralDecomposition diagonalize(const DisorderRealization& real) {
    const int n = real.size;
    if (n < 2)
        throw ArgumentError("nothing to diagonalize");

    Vec sub = Vec::Constant(n - 1, -1.0);
    Eigen::SelfAdjointEigenSolver<Mat> solver;
    solver.computeFromTridiagonal(real.epsilon, sub,
                                  Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw NumericError("tridiagonal eigensolver failed to converge for " +
                           std::to_string(n) + " sites");

    SpectralDecomposition spec;
    spec.energies = solver.eigenvalues();
    spec.vectors = solver.eigenvectors();
    spec.centers.resize(n);
    for (int i = 0; i < n; ++i) {
        int c = localization_center(spec.vectors.col(i));
        if (spec.vectors(c, i) < 0.0)
            spec.vectors.col(i) = -spec.vectors.col(i);
        spec.centers[i] = c;
    }
    return spec;
}

LocalizationFit fit_localization_length(std::span<const SpectralDecomposition> specs,
                                        EnergyWindow window,
                                        int boundary_margin,
                                        double amplitude_floor) {
    if (!(window.lo < window.hi))
        throw ArgumentError("energy window is empty");
    if (boundary_margin < 0)
        throw ArgumentError("boundary margin must be non-negative");

    // Accumulate the normal equations for log|v_n| = intercept + slope * |n - c|.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto& spec : specs) {
        const int sites = static_cast<int>(spec.vectors.rows());
        for (int i = 0; i < spec.size(); ++i) {
            double e = spec.energies[i];
            if (e < window.lo || e > window.hi) continue;
            const int c = spec.centers[i];
            for (int site = boundary_margin; site < sites - boundary_margin; ++site) {
                double a = std::abs(spec.vectors(site, i));
                if (a <= amplitude_floor) continue;
                double x = std::abs(site - c);
                double y = std::log(a);
                sx += x; sy += y; sxx += x * x; sxy += x * y;
                ++m;
            }
        }
    }
    if (m < 2)
        throw ArgumentError("energy window selected no usable eigenstates");

    double denom = m * sxx - sx * sx;
    if (denom <= 0.0)
        throw NumericError("degenerate abscissa in localization fit");
    LocalizationFit fit;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    fit.points = m;
    if (fit.slope >= 0.0)
        throw NumericError("localization fit found no exponential decay");
    fit.xi = -1.0 / fit.slope;
    return fit;
}

LocalizationFit estimate_localization_length(int count, std::uint64_t first_seed,
                                             int size, EnergyWindow window) {
    if (count < 1)
        throw ArgumentError("need at least one realization");
    std::vector<SpectralDecomposition> specs;
    specs.reserve(count);
    const int sep = 25;
    const int site_O = default_site_O(size, sep);
    for (int k = 0; k < count; ++k) {
        auto real = draw_realization(size, first_seed + k, site_O, site_O + sep);
        specs.push_back(diagonalize(real));
    }
    return fit_localization_length(specs, window);
}

} // namespace humplab

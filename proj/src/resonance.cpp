#include "humplab/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "humplab/errors.hpp"
#include "humplab/hunt.hpp"
#include "humplab/lattice.hpp"
#include "humplab/propagator.hpp"
#include "humplab/two_mode.hpp"

namespace humplab {

double rabi_transfer(double delta_e, double t) {
    double s = std::sin(0.5 * delta_e * t);
    return s * s;
}

RParameter r_parameter(const DoubleHumpPair& pair,
                       const SpectralDecomposition& spec) {
    const int n = spec.size();
    if (pair.y_O.size() != n)
        throw ArgumentError("pair and spectrum sizes disagree");

    Vec y3(n);
    for (int k = 0; k < n; ++k)
        y3[k] = pair.y_O[k] * pair.y_O[k] * pair.y_O[k];
    const double e_O = pair.y_O.dot(apply_hamiltonian(pair.realization, pair.y_O));

    RParameter r;
    for (int i = 0; i < n; ++i) {
        if (i == pair.index_plus || i == pair.index_minus)
            continue;
        double v = y3.dot(spec.vectors.col(i));
        double de = e_O - spec.energies[i];
        if (std::abs(de) < 1e-12) {
            if (v != 0.0) {
                r.divergent = true;
                continue;
            }
            continue;  // 0/0: state carries no coupling at all
        }
        r.inverse += std::abs(v / de);
    }
    if (r.divergent) {
        r.value = 0.0;
        r.inverse = std::numeric_limits<double>::infinity();
    } else if (r.inverse == 0.0) {
        r.infinite = true;
        r.value = std::numeric_limits<double>::infinity();
    } else {
        r.value = 1.0 / r.inverse;
    }
    return r;
}

void BetaCConfig::validate() const {
    if (!(grid_lo > 0.0) || !(grid_hi > grid_lo))
        throw ArgumentError("beta grid must be positive and increasing");
    if (grid_points < 2)
        throw ArgumentError("beta grid needs at least two points");
    if (refine_steps < 0)
        throw ArgumentError("refine steps must be non-negative");
    if (!(mse_threshold > 0.0))
        throw ArgumentError("mse threshold must be positive");
    if (!(lattice_dt > 0.0))
        throw ArgumentError("lattice dt must be positive");
    if (grid_samples < 16)
        throw ArgumentError("comparison grid too coarse");
    if (max_doublings < 0)
        throw ArgumentError("max doublings must be non-negative");
}

namespace {

// Two-mode u(t) on k = 0..samples at spacing period/samples. The Bloch
// step divides the grid spacing exactly so no interpolation is needed.
std::vector<double> two_mode_on_grid(const TwoModeCoefficients& c,
                                     double period, int samples) {
    const long substeps = 4;
    const double dt = period / (static_cast<double>(samples) * substeps);
    auto traj = integrate_bloch({1.0, 0.0, 0.0}, c, dt, period, substeps);
    if (traj.states.size() < static_cast<std::size_t>(samples + 1))
        throw NumericError("two-mode grid sampling came up short");
    std::vector<double> u(samples + 1);
    for (int k = 0; k <= samples; ++k)
        u[k] = traj.states[k].u;
    return u;
}

// Lattice s(t) on the same grid, using the nearest step count whose
// stride lands exactly on the grid points.
std::vector<double> lattice_on_grid(const DoubleHumpPair& pair,
                                    const SpectralDecomposition& spec,
                                    double beta, double period, int samples,
                                    double dt_target) {
    const double grid_dt = period / samples;
    const long stride = std::max<long>(1, std::lround(std::ceil(grid_dt / dt_target)));
    PropagatorConfig pc;
    pc.dt = grid_dt / static_cast<double>(stride);
    pc.t_max = period;
    pc.sample_stride = stride;
    pc.beta = beta;

    CVec psi0 = pair.y_O.cast<Complex>();
    auto trace = evolve(psi0, pair.realization, spec, pc, &pair);
    if (trace.s.size() < static_cast<std::size_t>(samples + 1))
        throw NumericError("lattice grid sampling came up short");
    return {trace.s.begin(), trace.s.begin() + samples + 1};
}

OscillationMetrics metrics_with_extension(const TwoModeCoefficients& c,
                                          int max_doublings,
                                          const DoubleHumpPair& pair) {
    const double scale = 2.0 * std::abs(c.capK) + std::abs(c.omega1 - c.omega2)
                       + std::abs(c.Omega1) + std::abs(c.Omega2)
                       + 2.0 * (std::abs(c.A1) + std::abs(c.A2))
                       + 2.0 * std::abs(c.B);
    const double t_fast = 2.0 * std::numbers::pi / scale;
    const double dt = t_fast / 2000.0;
    double t_max = std::max(4.0 * t_fast, 2.0 * pair.rabi_period());
    for (int attempt = 0; attempt <= max_doublings; ++attempt) {
        auto traj = integrate_bloch({1.0, 0.0, 0.0}, c, dt, t_max);
        auto m = oscillation_metrics(traj, c);
        if (m.period_found)
            return m;
        t_max *= 2.0;
    }
    throw PeriodNotFound("no two-mode period within the extended horizon");
}

} // namespace

double two_mode_mse(const DoubleHumpPair& pair, const SpectralDecomposition& spec,
                    double beta, const BetaCConfig& cfg) {
    cfg.validate();
    auto c = compute_coefficients(pair, beta);
    auto m = metrics_with_extension(c, cfg.max_doublings, pair);

    auto u = two_mode_on_grid(c, m.period, cfg.grid_samples);
    auto s = lattice_on_grid(pair, spec, beta, m.period, cfg.grid_samples,
                             cfg.lattice_dt);

    // Trapezoidal mean of (u - s)^2 over one period.
    const int n = cfg.grid_samples;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        double d = u[k] - s[k];
        double w = (k == 0 || k == n) ? 0.5 : 1.0;
        acc += w * d * d;
    }
    return acc / n;
}

BetaCResult find_beta_c(const DoubleHumpPair& pair,
                        const SpectralDecomposition& spec,
                        const BetaCConfig& cfg) {
    cfg.validate();
    auto mse = [&](double beta) { return two_mode_mse(pair, spec, beta, cfg); };

    const double ratio = std::pow(cfg.grid_hi / cfg.grid_lo,
                                  1.0 / (cfg.grid_points - 1));
    BetaCResult res;
    double prev_beta = 0.0;
    double prev_mse = 0.0;
    bool violated = false;
    double bad_beta = 0.0;

    for (int k = 0; k < cfg.grid_points; ++k) {
        double beta = cfg.grid_lo * std::pow(ratio, k);
        if (k == cfg.grid_points - 1) beta = cfg.grid_hi;
        double e = mse(beta);
        if (e >= cfg.mse_threshold) {
            if (k == 0) {
                res.status = BetaCStatus::below_grid;
                res.beta_c = 0.0;
                res.mse_at_beta_c = e;
                return res;
            }
            violated = true;
            bad_beta = beta;
            break;
        }
        prev_beta = beta;
        prev_mse = e;
    }

    if (!violated) {
        res.status = BetaCStatus::at_grid_max;
        res.beta_c = cfg.grid_hi;
        res.mse_at_beta_c = prev_mse;
        return res;
    }

    double lo = prev_beta, hi = bad_beta;
    double mse_lo = prev_mse;
    for (int k = 0; k < cfg.refine_steps; ++k) {
        double mid = 0.5 * (lo + hi);
        double e = mse(mid);
        if (e < cfg.mse_threshold) {
            lo = mid;
            mse_lo = e;
        } else {
            hi = mid;
        }
    }
    res.beta_c = lo;
    res.mse_at_beta_c = mse_lo;
    res.status = BetaCStatus::ok;
    return res;
}

SpreadingComparison compare_spreading(const DoubleHumpPair& pair,
                                      const SpectralDecomposition& spec,
                                      const PropagatorConfig& cfg) {
    cfg.validate();
    CVec psi0 = pair.y_O.cast<Complex>();

    SpreadingComparison out;
    out.tuned = evolve(psi0, pair.realization, spec, cfg, &pair);

    auto broken = break_realization(pair.realization);
    auto broken_spec = diagonalize(broken);
    out.broken = evolve(psi0, broken, broken_spec, cfg, &pair);
    return out;
}

} // namespace humplab

#include "humplab/two_mode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "humplab/errors.hpp"
#include "humplab/lattice.hpp"

namespace humplab {

TwoModeCoefficients compute_coefficients(const DoubleHumpPair& pair, double beta) {
    const Vec& p1 = pair.phi1;
    const Vec& p2 = pair.phi2;
    if (p1.size() == 0 || p1.size() != p2.size())
        throw ArgumentError("pair packets missing or mismatched");

    Vec h1 = apply_hamiltonian(pair.realization, p1);
    Vec h2 = apply_hamiltonian(pair.realization, p2);

    double S40 = 0, S04 = 0, S31 = 0, S13 = 0, S22 = 0;
    for (Eigen::Index n = 0; n < p1.size(); ++n) {
        const double a = p1[n], b = p2[n];
        S40 += a * a * a * a;
        S04 += b * b * b * b;
        S31 += a * a * a * b;
        S13 += a * b * b * b;
        S22 += a * a * b * b;
    }

    TwoModeCoefficients c;
    c.omega1 = p1.dot(h1) + 2.0 * beta * S22;
    c.omega2 = p2.dot(h2) + 2.0 * beta * S22;
    c.capK = p1.dot(h2);
    c.Omega1 = beta * (S40 - 2.0 * S22);
    c.Omega2 = beta * (S04 - 2.0 * S22);
    c.A1 = beta * S31;
    c.A2 = beta * S13;
    c.B = beta * S22;
    return c;
}

AmplitudePair amplitude_derivative(const AmplitudePair& a,
                                   const TwoModeCoefficients& c) {
    const Complex i(0.0, 1.0);
    const Complex p1 = a.psi1, p2 = a.psi2;
    const double n1 = std::norm(p1), n2 = std::norm(p2);

    Complex r1 = (c.omega1 + c.Omega1 * n1) * p1 + c.capK * p2
               + 2.0 * c.A1 * p2
               + c.A1 * p1 * p1 * std::conj(p2)
               + c.B * p2 * p2 * std::conj(p1)
               + (c.A2 - 2.0 * c.A1) * n2 * p2;
    Complex r2 = (c.omega2 + c.Omega2 * n2) * p2 + c.capK * p1
               + 2.0 * c.A2 * p1
               + c.A2 * p2 * p2 * std::conj(p1)
               + c.B * p1 * p1 * std::conj(p2)
               + (c.A1 - 2.0 * c.A2) * n1 * p1;
    return {-i * r1, -i * r2};
}

BlochState bloch_from_amplitudes(const AmplitudePair& a) {
    BlochState rho;
    rho.u = std::norm(a.psi1) - std::norm(a.psi2);
    Complex cross = std::conj(a.psi1) * a.psi2;
    rho.v = 2.0 * cross.imag();
    rho.w = 2.0 * cross.real();
    return rho;
}

BlochState bloch_torque(const BlochState& rho, const TwoModeCoefficients& c) {
    BlochState t;
    t.u = c.omega1 - c.omega2
        + 0.5 * c.Omega1 * (1.0 + rho.u) - 0.5 * c.Omega2 * (1.0 - rho.u)
        + (c.A1 - c.A2) * rho.w;
    t.v = -c.B * rho.v;
    t.w = 2.0 * c.capK + c.A1 * (1.0 + rho.u) + c.A2 * (1.0 - rho.u)
        + c.B * rho.w;
    return t;
}

namespace {

BlochState cross(const BlochState& a, const BlochState& b) {
    return {a.v * b.w - a.w * b.v,
            a.w * b.u - a.u * b.w,
            a.u * b.v - a.v * b.u};
}

BlochState bloch_velocity(const BlochState& rho, const TwoModeCoefficients& c) {
    return cross(rho, bloch_torque(rho, c));
}

BlochState axpy(const BlochState& a, double h, const BlochState& d) {
    return {a.u + h * d.u, a.v + h * d.v, a.w + h * d.w};
}

} // namespace

BlochTrajectory integrate_bloch(const BlochState& rho0,
                                const TwoModeCoefficients& c,
                                double dt, double t_max,
                                long sample_stride) {
    if (!(dt > 0.0) || !(t_max > 0.0) || sample_stride < 1)
        throw ArgumentError("bad Bloch integration parameters");

    const long n_steps = std::max<long>(1, std::lround(t_max / dt));
    BlochTrajectory traj;
    traj.times.reserve(n_steps / sample_stride + 2);
    traj.states.reserve(n_steps / sample_stride + 2);

    BlochState rho = rho0;
    auto push = [&](long step) {
        traj.times.push_back(step * dt);
        traj.states.push_back(rho);
    };
    push(0);

    for (long step = 1; step <= n_steps; ++step) {
        BlochState k1 = bloch_velocity(rho, c);
        BlochState k2 = bloch_velocity(axpy(rho, 0.5 * dt, k1), c);
        BlochState k3 = bloch_velocity(axpy(rho, 0.5 * dt, k2), c);
        BlochState k4 = bloch_velocity(axpy(rho, dt, k3), c);
        rho.u += dt / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
        rho.v += dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        rho.w += dt / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);

        double dev = std::abs(std::sqrt(rho.u * rho.u + rho.v * rho.v +
                                        rho.w * rho.w) - 1.0);
        traj.max_norm_deviation = std::max(traj.max_norm_deviation, dev);
        if (dev > 1e-6)
            throw NumericError("Bloch vector left the unit sphere, reduce dt");
        if (step % sample_stride == 0 || step == n_steps)
            push(step);
    }
    return traj;
}

AmplitudeTrajectory integrate_amplitudes(const AmplitudePair& a0,
                                         const TwoModeCoefficients& c,
                                         double dt, double t_max,
                                         long sample_stride) {
    if (!(dt > 0.0) || !(t_max > 0.0) || sample_stride < 1)
        throw ArgumentError("bad amplitude integration parameters");

    // Rotating frame at the mean level position.
    const double delta = 0.5 * (c.omega1 + c.omega2);
    TwoModeCoefficients cr = c;
    cr.omega1 -= delta;
    cr.omega2 -= delta;

    const long n_steps = std::max<long>(1, std::lround(t_max / dt));
    AmplitudeTrajectory traj;
    traj.times.reserve(n_steps / sample_stride + 2);
    traj.states.reserve(n_steps / sample_stride + 2);

    AmplitudePair a = a0;
    auto push = [&](long step) {
        const double t = step * dt;
        Complex phase = std::polar(1.0, -delta * t);
        traj.times.push_back(t);
        traj.states.push_back({a.psi1 * phase, a.psi2 * phase});
    };
    push(0);

    auto add = [](const AmplitudePair& x, double h, const AmplitudePair& d) {
        return AmplitudePair{x.psi1 + h * d.psi1, x.psi2 + h * d.psi2};
    };
    for (long step = 1; step <= n_steps; ++step) {
        AmplitudePair k1 = amplitude_derivative(a, cr);
        AmplitudePair k2 = amplitude_derivative(add(a, 0.5 * dt, k1), cr);
        AmplitudePair k3 = amplitude_derivative(add(a, 0.5 * dt, k2), cr);
        AmplitudePair k4 = amplitude_derivative(add(a, dt, k3), cr);
        a.psi1 += dt / 6.0 * (k1.psi1 + 2.0 * k2.psi1 + 2.0 * k3.psi1 + k4.psi1);
        a.psi2 += dt / 6.0 * (k1.psi2 + 2.0 * k2.psi2 + 2.0 * k3.psi2 + k4.psi2);
        if (step % sample_stride == 0 || step == n_steps)
            push(step);
    }
    return traj;
}

namespace {

double dist2(const BlochState& a, const BlochState& b) {
    double du = a.u - b.u, dv = a.v - b.v, dw = a.w - b.w;
    return du * du + dv * dv + dw * dw;
}

double dot(const BlochState& a, const BlochState& b) {
    return a.u * b.u + a.v * b.v + a.w * b.w;
}

} // namespace

OscillationMetrics oscillation_metrics(const BlochTrajectory& traj,
                                       const TwoModeCoefficients& c) {
    const std::size_t n = traj.states.size();
    OscillationMetrics out;
    if (n < 4)
        return out;

    const BlochState& rho0 = traj.states[0];
    const BlochState v0 = bloch_velocity(rho0, c);
    const double dt_s = traj.times[1] - traj.times[0];

    std::vector<double> d2(n);
    double d2_max = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        d2[k] = dist2(traj.states[k], rho0);
        d2_max = std::max(d2_max, d2[k]);
    }
    const double d2_return = std::max(1e-8, 1e-6 * d2_max);

    // First return: wait for the orbit's far point, then take the first
    // distance minimum with velocity parallel to the initial one.
    std::size_t k_period = 0;
    bool seen_far_point = false;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (!seen_far_point) {
            if (d2[k] >= d2[k - 1] && d2[k] > d2[k + 1])
                seen_far_point = true;
            continue;
        }
        if (!(d2[k] < d2[k - 1] && d2[k] <= d2[k + 1]))
            continue;
        if (dot(bloch_velocity(traj.states[k], c), v0) <= 0.0)
            continue;

        double denom = d2[k - 1] - 2.0 * d2[k] + d2[k + 1];
        double shift = 0.0;
        double d2_min = d2[k];
        if (denom > 0.0) {
            shift = 0.5 * (d2[k - 1] - d2[k + 1]) / denom;
            d2_min = d2[k] - 0.25 * (d2[k - 1] - d2[k + 1]) * shift;
        }
        if (d2_min <= d2_return) {
            out.period = traj.times[k] + shift * dt_s;
            out.period_found = true;
            k_period = k;
            break;
        }
    }
    if (!out.period_found)
        return out;

    // Deepest u within the period, refined on the same 3-point stencil.
    std::size_t k_end = std::min(n - 1, k_period + 1);
    std::size_t k_min = 0;
    for (std::size_t k = 1; k <= k_end; ++k)
        if (traj.states[k].u < traj.states[k_min].u) k_min = k;

    double u_min = traj.states[k_min].u;
    if (k_min > 0 && k_min + 1 < n) {
        double um = traj.states[k_min - 1].u;
        double up = traj.states[k_min + 1].u;
        double denom = um - 2.0 * u_min + up;
        if (denom > 0.0) {
            double shift = 0.5 * (um - up) / denom;
            u_min = u_min - 0.25 * (um - up) * shift;
        }
    }
    out.min_u = u_min;
    out.transfer_fraction = 0.5 * (1.0 - u_min);
    return out;
}

namespace {

double coefficient_frequency_scale(const TwoModeCoefficients& c) {
    return 2.0 * std::abs(c.capK) + std::abs(c.omega1 - c.omega2)
         + std::abs(c.Omega1) + std::abs(c.Omega2)
         + 2.0 * (std::abs(c.A1) + std::abs(c.A2)) + 2.0 * std::abs(c.B);
}

} // namespace

OscillationMetrics packet_metrics(const TwoModeCoefficients& c,
                                  int max_doublings) {
    const double t_fast = 2.0 * std::numbers::pi / coefficient_frequency_scale(c);
    const double dt = t_fast / 2000.0;
    double t_max = 4.0 * t_fast;
    const BlochState rho0{1.0, 0.0, 0.0};

    for (int attempt = 0; attempt <= max_doublings; ++attempt) {
        auto traj = integrate_bloch(rho0, c, dt, t_max);
        auto m = oscillation_metrics(traj, c);
        if (m.period_found)
            return m;
        t_max *= 2.0;
    }
    throw PeriodNotFound("two-mode orbit shows no return within " +
                         std::to_string(t_max / 2.0) + " time units");
}

double transfer_fraction(const DoubleHumpPair& pair, double beta,
                         int max_doublings) {
    return packet_metrics(compute_coefficients(pair, beta), max_doublings)
        .transfer_fraction;
}

BetaQuarterResult find_beta_quarter(const DoubleHumpPair& pair,
                                    double beta_lo, double beta_hi,
                                    double tol) {
    if (!(beta_lo < beta_hi) || !(tol > 0.0))
        throw ArgumentError("bad beta_quarter bracket");

    auto f = [&](double beta) { return transfer_fraction(pair, beta); };

    double f_lo = f(beta_lo);
    double f_hi = f(beta_hi);
    if (f_lo < 0.25 || f_hi >= 0.25)
        throw ArgumentError("transfer fraction does not cross 1/4 inside the bracket");

    // Coarse monotonicity scan before trusting bisection.
    const int coarse = 25;
    std::vector<double> grid(coarse);
    std::vector<bool> pass(coarse);
    for (int k = 0; k < coarse; ++k) {
        grid[k] = beta_lo + (beta_hi - beta_lo) * k / (coarse - 1);
        if (k == 0)
            pass[k] = true;
        else if (k == coarse - 1)
            pass[k] = f_hi >= 0.25;
        else
            pass[k] = f(grid[k]) >= 0.25;
    }
    int sign_changes = 0;
    double lo = beta_lo, hi = beta_hi;
    for (int k = 1; k < coarse; ++k) {
        if (pass[k] != pass[k - 1]) {
            ++sign_changes;
            if (sign_changes == 1) {
                lo = grid[k - 1];
                hi = grid[k];
            }
        }
    }

    BetaQuarterResult res;
    if (sign_changes > 1) {
        // Not monotone: walk down from the top in tol steps and keep the
        // largest passing beta.
        res.flagged_nonmonotone = true;
        long steps = std::lround(std::ceil((beta_hi - beta_lo) / tol));
        for (long k = steps - 1; k >= 0; --k) {
            double b = beta_lo + k * tol;
            double fb = (k == 0) ? f_lo : f(b);
            if (fb >= 0.25) {
                res.beta_quarter = b;
                res.transfer_at_result = fb;
                return res;
            }
        }
        res.beta_quarter = beta_lo;
        res.transfer_at_result = f_lo;
        return res;
    }

    double f_pass = (lo == beta_lo) ? f_lo : f(lo);
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm >= 0.25) {
            lo = mid;
            f_pass = fm;
        } else {
            hi = mid;
        }
    }
    res.beta_quarter = lo;
    res.transfer_at_result = f_pass;
    return res;
}

} // namespace humplab

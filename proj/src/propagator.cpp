#include "humplab/propagator.hpp"

#include <cmath>
#include <string>

#include "humplab/errors.hpp"

namespace humplab {

void PropagatorConfig::validate() const {
    if (!(dt > 0.0))
        throw ArgumentError("time step must be positive");
    if (!(t_max > 0.0))
        throw ArgumentError("t_max must be positive");
    if (sample_stride < 1)
        throw ArgumentError("sample stride must be at least 1");
    if (!std::isfinite(beta))
        throw ArgumentError("beta must be finite");
}

namespace {

void half_nonlinear(CVec& psi, double beta, double dt) {
    if (beta == 0.0) return;
    const double c = -0.5 * beta * dt;
    for (Eigen::Index n = 0; n < psi.size(); ++n)
        psi[n] *= std::polar(1.0, c * std::norm(psi[n]));
}

// Exact linear step: psi <- V diag(exp(-i E dt)) V^T psi, done with four
// real mat-vecs so Eigen never mixes scalar types.
struct LinearStep {
    Mat V;
    Vec cos_ph, sin_ph;
    Vec re, im, re2, im2;

    LinearStep(const SpectralDecomposition& spec, double dt)
        : V(spec.vectors),
          cos_ph(spec.size()), sin_ph(spec.size()),
          re(spec.size()), im(spec.size()),
          re2(spec.size()), im2(spec.size()) {
        // The solver's basis is orthonormal only to ~N*eps and that
        // defect is biased, so it walks the norm linearly over the 1e5+
        // steps of a long run. One Newton-Schulz pass squares the
        // defect away.
        Mat G = 3.0 * Mat::Identity(V.rows(), V.cols());
        G.noalias() -= V.transpose() * V;
        V = 0.5 * V * G;
        for (int i = 0; i < spec.size(); ++i) {
            cos_ph[i] = std::cos(spec.energies[i] * dt);
            sin_ph[i] = std::sin(spec.energies[i] * dt);
        }
    }

    void apply(CVec& psi) {
        const Eigen::Index n = psi.size();
        for (Eigen::Index k = 0; k < n; ++k) {
            re[k] = psi[k].real();
            im[k] = psi[k].imag();
        }
        re2.noalias() = V.transpose() * re;
        im2.noalias() = V.transpose() * im;
        // (re2 + i im2) * (cos - i sin)
        for (Eigen::Index k = 0; k < n; ++k) {
            double a = re2[k], b = im2[k];
            re[k] = a * cos_ph[k] + b * sin_ph[k];
            im[k] = b * cos_ph[k] - a * sin_ph[k];
        }
        re2.noalias() = V * re;
        im2.noalias() = V * im;
        for (Eigen::Index k = 0; k < n; ++k)
            psi[k] = Complex(re2[k], im2[k]);
    }
};

} // namespace

CVec split_step(const CVec& psi, const SpectralDecomposition& spec,
                double beta, double dt) {
    if (psi.size() != spec.size())
        throw ArgumentError("state size does not match the spectrum");
    CVec out = psi;
    LinearStep lin(spec, dt);
    half_nonlinear(out, beta, dt);
    lin.apply(out);
    half_nonlinear(out, beta, dt);
    return out;
}

double second_moment(const CVec& psi) {
    double norm = 0.0, mean = 0.0;
    for (Eigen::Index n = 0; n < psi.size(); ++n) {
        double p = std::norm(psi[n]);
        norm += p;
        mean += p * static_cast<double>(n);
    }
    if (norm <= 0.0)
        throw ArgumentError("second moment of a zero state");
    mean /= norm;
    double m2 = 0.0;
    for (Eigen::Index n = 0; n < psi.size(); ++n) {
        double d = static_cast<double>(n) - mean;
        m2 += std::norm(psi[n]) * d * d;
    }
    return m2 / norm;
}

double nlse_energy(const CVec& psi, const DisorderRealization& real, double beta) {
    if (psi.size() != real.size)
        throw ArgumentError("state size does not match the lattice");
    double e = 0.0;
    for (int n = 0; n < real.size; ++n) {
        double p = std::norm(psi[n]);
        e += real.epsilon[n] * p + 0.5 * beta * p * p;
        if (n + 1 < real.size)
            e -= 2.0 * (std::conj(psi[n]) * psi[n + 1]).real();
    }
    return e;
}

Complex mode_overlap(const Vec& y, const CVec& psi) {
    if (y.size() != psi.size())
        throw ArgumentError("mode and state sizes differ");
    Complex a(0.0, 0.0);
    for (Eigen::Index n = 0; n < y.size(); ++n)
        a += y[n] * psi[n];
    return a;
}

TimeTrace evolve(const CVec& psi0, const DisorderRealization& real,
                 const SpectralDecomposition& spec, const PropagatorConfig& cfg,
                 const DoubleHumpPair* pair) {
    cfg.validate();
    if (psi0.size() != real.size || spec.size() != real.size)
        throw ArgumentError("state, lattice and spectrum sizes disagree");

    const long n_steps = std::max<long>(1, std::lround(cfg.t_max / cfg.dt));

    TimeTrace trace;
    trace.has_pair = pair != nullptr;
    const std::size_t approx = static_cast<std::size_t>(n_steps / cfg.sample_stride + 2);
    trace.times.reserve(approx);

    CVec psi = psi0;
    LinearStep lin(spec, cfg.dt);

    auto sample = [&](long step) {
        const double t = step * cfg.dt;
        trace.times.push_back(t);
        trace.norm.push_back(psi.squaredNorm());
        trace.energy.push_back(nlse_energy(psi, real, cfg.beta));
        trace.m2.push_back(second_moment(psi));
        if (pair) {
            double p_O = std::norm(mode_overlap(pair->y_O, psi));
            double p_P = std::norm(mode_overlap(pair->y_P, psi));
            double p_plus = std::norm(mode_overlap(pair->plus_state, psi));
            double p_minus = std::norm(mode_overlap(pair->minus_state, psi));
            trace.p_O.push_back(p_O);
            trace.p_P.push_back(p_P);
            trace.s.push_back(p_O - p_P);
            trace.w_mode.push_back(p_plus - p_minus);
        }
    };

    sample(0);
    for (long step = 1; step <= n_steps; ++step) {
        half_nonlinear(psi, cfg.beta, cfg.dt);
        lin.apply(psi);
        half_nonlinear(psi, cfg.beta, cfg.dt);
        if (!std::isfinite(psi[0].real()))
            throw NumericError("state blew up at step " + std::to_string(step));
        if (step % cfg.sample_stride == 0 || step == n_steps)
            sample(step);
    }
    return trace;
}

} // namespace humplab

#pragma once

#include "humplab/types.hpp"

namespace humplab {

/// One Strang step of i dpsi/dt = H0 psi + beta |psi|^2 psi: a half
/// nonlinear phase, the exact linear step in the eigenbasis, another
/// half phase. Norm-conserving to round-off; exact at beta = 0.
CVec split_step(const CVec& psi, const SpectralDecomposition& spec,
                double beta, double dt);

double second_moment(const CVec& psi);

/// Conserved energy of the lattice equation:
/// sum_n [ -2 Re(conj(psi_n) psi_{n+1}) + eps_n |psi_n|^2 + (beta/2) |psi_n|^4 ].
double nlse_energy(const CVec& psi, const DisorderRealization& real, double beta);

/// Complex overlap <y|psi> for a real mode y.
Complex mode_overlap(const Vec& y, const CVec& psi);

/// Propagate psi0 and record observables every cfg.sample_stride steps
/// (plus t = 0 and the final step). When `pair` is given the projection
/// columns are filled: s = p_O - p_P, the packet populations, and the
/// population difference of the two pair eigenmodes.
TimeTrace evolve(const CVec& psi0, const DisorderRealization& real,
                 const SpectralDecomposition& spec, const PropagatorConfig& cfg,
                 const DoubleHumpPair* pair = nullptr);

} // namespace humplab

#pragma once

#include <cstdint>

#include "qst/types.hpp"

namespace qst {

/// (|0...0> + |1...1>)/sqrt(2) on n qubits.
PureState ghz_state(int n_qubits);

/// [(|0> + |1>)/sqrt(2)]^(tensor n): all 2^n amplitudes equal 2^(-n/2).
PureState hadamard_state(int n_qubits);

/// Ginibre random mixed state: G^dag G / Tr(G^dag G) with G a rank x dim
/// matrix of independent standard complex Gaussians drawn from `seed`.
DensityMatrix random_density(Index dim, Index rank, std::uint64_t seed);

/// Truncated Fock-basis amplitudes of the coherent state |xi>,
/// c_n = exp(-|xi|^2/2) xi^n / sqrt(n!), without renormalization.
CVector coherent_amplitudes(Complex xi, Index dim);

/// Coherent state |xi>, renormalized after Fock truncation. Warns on stderr
/// when |xi|^2 + 5|xi| exceeds dim (truncation inadequate).
PureState coherent_state(Complex xi, Index dim);

/// Even cat state proportional to |xi> + |-xi>, normalized after truncation.
PureState cat_state(Complex xi, Index dim);

/// Tr(rho^2); 1 for pure states, 1/d for the maximally mixed state.
double purity(const DensityMatrix& rho);

/// |psi><psi| as a validated density matrix.
DensityMatrix projector(const PureState& psi);

}  // namespace qst

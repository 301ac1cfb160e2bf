#pragma once

#include "qst/types.hpp"

namespace qst {

/// Uhlmann-Jozsa fidelity F = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2,
/// computed via Hermitian eigendecompositions with negative-dust clamping;
/// the result is clamped to [0, 1]. The matrix overload skips validation
/// for matrices that are valid by construction.
double uj_fidelity(const CMatrix& rho, const CMatrix& sigma);
double uj_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Real field sampled on a uniform steps x steps phase-space grid over
/// [-extent, extent]^2, row-major with y outer and x inner.
struct PhaseGrid {
  double extent = 0.0;
  int steps = 0;
  RMatrix values;  // (y, x) indexed

  double coordinate(int i) const {
    return -extent + 2.0 * extent * i / (steps - 1);
  }
};

/// Wigner function of a Fock-basis density matrix via displaced parity,
/// W(beta) = (2/pi) tr[D^dag(beta) rho D(beta) P], with the displacement
/// operator built by exponentiating beta a^dag - conj(beta) a in the
/// truncated space.
PhaseGrid wigner(const DensityMatrix& rho, double extent, int steps);

}  // namespace qst

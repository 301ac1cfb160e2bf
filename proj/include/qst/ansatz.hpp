#pragma once

#include <cstdint>
#include <variant>

#include "qst/types.hpp"

namespace qst {

/// rho = T^dag T / Tr(T^dag T) with T an m x dim factor; m bounds the rank.
/// The triangular variant (CD-tri) uses a dim x dim lower-triangular factor
/// whose strict upper entries are exactly zero.
struct CholeskyAnsatz {
  Index rank = 0;
  Index dim = 0;
  bool triangular = false;
  CMatrix factor;  // rank x dim
};

/// rho = sum_a w_a w_a^dag with the m blocks w_a = sqrt(p_a)|psi_a> stacked
/// into one unit-norm vector of length m*dim (the St(m*dim, 1) constraint).
struct StiefelAnsatz {
  Index rank = 0;
  Index dim = 0;
  CVector stacked;  // rank*dim, block a = segment(a*dim, dim)
};

/// rho = sum_a c_a q_a q_a^dag with c on the probability simplex and the
/// rows of Q unit-normalized.
struct PNAnsatz {
  Index rank = 0;
  Index dim = 0;
  RVector weights;  // rank
  CMatrix states;   // rank x dim, row a = q_a
};

enum class AnsatzKind { cd, cd_tri, sm, pn };

using Ansatz = std::variant<CholeskyAnsatz, StiefelAnsatz, PNAnsatz>;

/// Induced matrices without the full validity pass (used in hot loops; the
/// parameterizations make the result Hermitian PSD by construction).
CMatrix cd_matrix(const CholeskyAnsatz& a);
CMatrix sm_matrix(const StiefelAnsatz& a);
CMatrix pn_matrix(const PNAnsatz& a);
CMatrix induced_matrix(const Ansatz& a);

/// Validated density matrices from each parameterization.
DensityMatrix cd_to_density(const CholeskyAnsatz& a);
DensityMatrix sm_to_density(const StiefelAnsatz& a);
DensityMatrix pn_to_density(const PNAnsatz& a);

/// One constraint-preserving descent step on the Stiefel manifold: with
/// Gh = G/|G|, A = [Gh W], B = [W -Gh], the Cayley-transform update
///   W' = W - eta * A (I + (eta/2) B^dag A)^{-1} B^dag W
/// returns to unit norm exactly in exact arithmetic (2x2 closed-form
/// inverse). Requires |G| > 1e-30; the caller treats a vanishing gradient
/// as converged.
StiefelAnsatz sm_retract_step(const StiefelAnsatz& a, const CVector& grad,
                              double eta);

/// Projects raw parameters onto the PN constraint set: softmax on the
/// weights (max-subtracted) and norm division on each state row.
PNAnsatz pn_project(const RVector& weights_raw, const CMatrix& states_raw);

/// Standard-complex-Gaussian initialization followed by the appropriate
/// constraint projection; deterministic given the seed. rank is forced to
/// dim for cd_tri.
Ansatz init_ansatz(AnsatzKind kind, Index dim, Index rank, std::uint64_t seed);

AnsatzKind kind_of(const Ansatz& a);
Index rank_of(const Ansatz& a);

}  // namespace qst

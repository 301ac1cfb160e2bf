#pragma once

#include "qst/measurement.hpp"
#include "qst/types.hpp"

namespace qst {

/// A_{mn} = tr(Pi_m E_n) with E_{n = i*dim + j} = |i><j|; rows follow the
/// operator order of the set.
struct SensingMatrix {
  CMatrix entries;  // size x dim^2
};

SensingMatrix build_sensing(const ObservableSet& set);

/// Least-squares solve of A X = B restricted to the rows present in `data`;
/// returns the Hermitian part of the reshaped minimizer. The result is NOT
/// guaranteed positive semidefinite; callers validate separately. Throws
/// IncompleteDataError (with the numerical rank) when the restricted sensing
/// matrix does not have full column rank.
CMatrix linear_inversion(const DataSet& data, const ObservableSet& set);

/// One R(rho) rho R(rho) update, re-Hermitized and trace-normalized, with
/// R(rho) = sum_j (B_j / tr(P_j rho)) P_j. Terms with vanishing predicted
/// probability but positive observed value are skipped with a warning.
CMatrix imle_iterate(const CMatrix& rho, const DataSet& data,
                     const ObservableSet& set);

/// Iterative maximum likelihood estimation for projector-valued sets
/// (husimi_projector kind; data values must be nonnegative). Starts from
/// I/dim and iterates until max_iters or ||rho' - rho||_F < tol. The
/// log-likelihood sum_j B_j log tr(P_j rho) is monitored; a decrease beyond
/// 1e-9 aborts with a diagnostic.
DensityMatrix imle(const DataSet& data, const ObservableSet& set,
                   int max_iters, double tol);

}  // namespace qst

#pragma once

#include <vector>

#include "qst/ansatz.hpp"
#include "qst/measurement.hpp"
#include "qst/types.hpp"

namespace qst {

/// Positions into a DataSet's entries; unique and nonempty.
struct Batch {
  std::vector<int> indices;
};

/// Returns {0, ..., n-1}.
Batch full_batch(Index n);

struct LossConfig {
  double lambda_l1 = 0.0;
};

/// L = sum_i [B_i - tr(Pi_i rho)]^2 + lambda * sum_ab |rho_ab|, restricted
/// to the batch. The matrix overload accepts arbitrary (e.g. perturbed)
/// matrices so gradients can be checked by finite differences.
double loss(const CMatrix& rho, const DataSet& data, const ObservableSet& set,
            const Batch& batch, const LossConfig& cfg);
double loss(const DensityMatrix& rho, const DataSet& data,
            const ObservableSet& set, const Batch& batch,
            const LossConfig& cfg);

struct PNGradient {
  RVector weights;  // dL/dc
  CMatrix states;   // dL/d(conj q), rows aligned with PNAnsatz::states
};

/// Conjugate-Wirtinger gradients dL/d(conj theta) of the batch loss for each
/// parameterization. The real-coordinate correspondence for testing is
/// dL/dRe = 2 Re G and dL/dIm = 2 Im G. The SM gradient is the ambient one
/// (the retraction handles the constraint); the PN gradients treat the
/// current projected point as free coordinates (straight-through).
CMatrix grad_cd(const CholeskyAnsatz& a, const DataSet& data,
                const ObservableSet& set, const Batch& batch,
                const LossConfig& cfg);
CVector grad_sm(const StiefelAnsatz& a, const DataSet& data,
                const ObservableSet& set, const Batch& batch,
                const LossConfig& cfg);
PNGradient grad_pn(const PNAnsatz& a, const DataSet& data,
                   const ObservableSet& set, const Batch& batch,
                   const LossConfig& cfg);

}  // namespace qst

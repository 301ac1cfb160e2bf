#include "qst/objective.hpp"

#include <cmath>
#include <numeric>

namespace qst {

namespace {

void check_batch(const Batch& batch, const DataSet& data) {
  if (batch.indices.empty()) {
    throw std::invalid_argument("batch: empty");
  }
  for (int idx : batch.indices) {
    if (idx < 0 || idx >= data.size()) {
      throw std::invalid_argument("batch: index out of range");
    }
  }
}

// Elementwise z/|z| with 0 at z = 0 (minimum-norm subgradient of |z|).
CMatrix sign_matrix(const CMatrix& m) {
  return m.unaryExpr([](Complex z) {
    const double a = std::abs(z);
    return a == 0.0 ? Complex(0.0, 0.0) : z / a;
  });
}

}  // namespace

Batch full_batch(Index n) {
  Batch b;
  b.indices.resize(n);
  std::iota(b.indices.begin(), b.indices.end(), 0);
  return b;
}

double loss(const CMatrix& rho, const DataSet& data, const ObservableSet& set,
            const Batch& batch, const LossConfig& cfg) {
  check_batch(batch, data);
  if (cfg.lambda_l1 < 0.0) {
    throw std::invalid_argument("loss: lambda_l1 must be >= 0");
  }
  double acc = 0.0;
  for (int idx : batch.indices) {
    const auto& e = data.entries[idx];
    const double f = set.trace_with(e.operator_index, rho).real();
    const double r = e.value - f;
    acc += r * r;
  }
  if (cfg.lambda_l1 > 0.0) {
    acc += cfg.lambda_l1 * rho.cwiseAbs().sum();
  }
  return acc;
}

double loss(const DensityMatrix& rho, const DataSet& data,
            const ObservableSet& set, const Batch& batch,
            const LossConfig& cfg) {
  return loss(rho.entries, data, set, batch, cfg);
}

CMatrix grad_cd(const CholeskyAnsatz& a, const DataSet& data,
                const ObservableSet& set, const Batch& batch,
                const LossConfig& cfg) {
  check_batch(batch, data);
  const double s = a.factor.squaredNorm();
  if (s <= 1e-30) {
    throw DegenerateAnsatzError("grad_cd: factor is numerically zero");
  }
  const Index d = a.dim;
  CMatrix rho = (a.factor.adjoint() * a.factor) / s;
  // G = sum_i 2(f_i - B_i)(T Pi_i - f_i T)/S
  //   = (T M - c T)/S with M = sum_i w_i Pi_i and c = sum_i w_i f_i.
  CMatrix m = CMatrix::Zero(d, d);
  double c = 0.0;
  for (int idx : batch.indices) {
    const auto& e = data.entries[idx];
    const double f = set.trace_with(e.operator_index, rho).real();
    const double w = 2.0 * (f - e.value);
    set.add_scaled(e.operator_index, Complex(w, 0.0), m);
    c += w * f;
  }
  if (cfg.lambda_l1 > 0.0) {
    // d|rho|_l1/d(conj T) = (T Z - |rho|_l1 T)/S with Z = sign(rho).
    m.noalias() += cfg.lambda_l1 * sign_matrix(rho);
    c += cfg.lambda_l1 * rho.cwiseAbs().sum();
  }
  CMatrix g = (a.factor * m - c * a.factor) / s;
  return g;
}

CVector grad_sm(const StiefelAnsatz& a, const DataSet& data,
                const ObservableSet& set, const Batch& batch,
                const LossConfig& cfg) {
  check_batch(batch, data);
  const Index d = a.dim;
  const CMatrix rho = sm_matrix(a);
  // Blocks as columns: stacked block b occupies segment(b*d, d).
  const Eigen::Map<const CMatrix> blocks(a.stacked.data(), d, a.rank);
  CVector grad = CVector::Zero(a.stacked.size());
  Eigen::Map<CMatrix> gblocks(grad.data(), d, a.rank);
  CMatrix applied(d, a.rank);
  for (int idx : batch.indices) {
    const auto& e = data.entries[idx];
    const double f = set.trace_with(e.operator_index, rho).real();
    const double w = 2.0 * (f - e.value);
    // G_b += w * Pi_i w_b (ambient gradient; the retraction handles the
    // constraint).
    set.apply(e.operator_index, blocks, applied);
    gblocks.noalias() += w * applied;
  }
  if (cfg.lambda_l1 > 0.0) {
    gblocks.noalias() += cfg.lambda_l1 * (sign_matrix(rho) * blocks);
  }
  return grad;
}

PNGradient grad_pn(const PNAnsatz& a, const DataSet& data,
                   const ObservableSet& set, const Batch& batch,
                   const LossConfig& cfg) {
  check_batch(batch, data);
  const Index d = a.dim;
  const Index m = a.rank;
  const CMatrix rho = pn_matrix(a);
  const CMatrix cols = a.states.transpose();  // column b = q_b
  PNGradient g;
  g.weights = RVector::Zero(m);
  CMatrix gcols = CMatrix::Zero(d, m);
  CMatrix applied(d, m);
  for (int idx : batch.indices) {
    const auto& e = data.entries[idx];
    const double f = set.trace_with(e.operator_index, rho).real();
    const double w = 2.0 * (f - e.value);
    set.apply(e.operator_index, cols, applied);
    // dL/dc_b = sum_i w_i q_b^dag Pi_i q_b; dL/d(conj q_b) = sum_i w_i c_b Pi_i q_b.
    for (Index b = 0; b < m; ++b) {
      g.weights(b) += w * cols.col(b).dot(applied.col(b)).real();
      gcols.col(b).noalias() += (w * a.weights(b)) * applied.col(b);
    }
  }
  if (cfg.lambda_l1 > 0.0) {
    const CMatrix z = sign_matrix(rho);
    const CMatrix zq = z * cols;
    for (Index b = 0; b < m; ++b) {
      g.weights(b) += cfg.lambda_l1 * cols.col(b).dot(zq.col(b)).real();
      gcols.col(b).noalias() += (cfg.lambda_l1 * a.weights(b)) * zq.col(b);
    }
  }
  g.states = gcols.transpose();
  return g;
}

}  // namespace qst

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qst/objective.hpp"

namespace qst {

/// Adam accumulator state over flattened real coordinates. Complex
/// parameters are packed as independent (re, im) pairs, so the elementwise
/// square and square root act on real coordinates.
struct AdamState {
  int t = 0;
  RVector m1;
  RVector m2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double eta = 0.0;    // current (decayed) step size
  double alpha = 1.0;  // per-iteration decay multiplier
};

AdamState make_adam(Index n_params, double eta0, double alpha);

/// One Adam update with decaying step size:
///   eta <- alpha * eta;  m <- b1 m + (1-b1) G;  v <- b2 v + (1-b2) G^2;
///   theta <- theta - eta * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps).
void adam_step(AdamState& state, Eigen::Ref<RVector> params,
               const RVector& grads);

/// [re, im] interleaved flattening used by the optimizer.
RVector pack_complex(const CMatrix& m);
void unpack_complex(const RVector& v, CMatrix& m);

/// n_iters independent uniform samples without replacement, sorted within
/// each batch; deterministic given the seed.
std::vector<Batch> minibatches(int n_total, int batch_size,
                               std::uint64_t seed, int n_iters);

struct RunConfig {
  AnsatzKind kind = AnsatzKind::cd;
  Index rank = 0;  // reconstruct() requires >= 1; 0 lets the harness resolve it
  int max_iters = 800;
  int batch_size = 256;
  double eta0 = 0.0;  // 0 selects the per-parameterization default
  double alpha = 0.999;
  double lambda_l1 = 0.0;
  std::uint64_t seed = 0;
  int record_every = 10;
  double fidelity_target = 0.0;  // 0 disables; requires truth
  bool early_stop = false;  // stop when full-data loss change over 50 iters < 1e-10
};

/// eta0 defaults: cd/cd-tri 1.0, sm 0.3, pn 1e-3.
double default_eta0(AnsatzKind kind);

struct ReconstructionResult {
  DensityMatrix rho;
  std::vector<int> recorded_iters;
  std::vector<double> loss_trace;      // full-data loss, lambda included
  std::vector<double> fidelity_trace;  // empty when truth absent
  std::vector<double> time_trace;      // cumulative wall seconds at records
  int iterations_run = 0;
  bool converged_early = false;
  double seconds_reconstruct = 0.0;  // optimizer work only
  double seconds_total = 0.0;        // including loss/fidelity recording
  RunConfig config;
};

/// Called at every record point with the induced matrix.
using RecordObserver = std::function<void(int iter, const CMatrix& rho)>;

/// Runs the full GD-QST loop: seeded ansatz init, mini-batch gradients,
/// Adam updates for cd/cd-tri/pn (with the zero mask re-applied for cd-tri
/// and the PN projection after every step) and retraction-based vanilla GD
/// for sm. Records full-data loss and, when truth is given, Uhlmann-Jozsa
/// fidelity every record_every iterations (and at the final one). The step
/// size follows eta_t = eta0 * alpha^t for both optimizers.
ReconstructionResult reconstruct(const DataSet& data, const ObservableSet& set,
                                 const RunConfig& cfg,
                                 const DensityMatrix* truth = nullptr,
                                 const RecordObserver& observer = {});

}  // namespace qst

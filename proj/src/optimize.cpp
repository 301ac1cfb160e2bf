#include "qst/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "qst/metrics.hpp"
#include "qst/rng.hpp"

namespace qst {

AdamState make_adam(Index n_params, double eta0, double alpha) {
  if (n_params < 1) {
    throw std::invalid_argument("make_adam: n_params must be positive");
  }
  if (!(eta0 > 0.0) || !(alpha > 0.0)) {
    throw std::invalid_argument("make_adam: eta0 and alpha must be positive");
  }
  AdamState st;
  st.m1 = RVector::Zero(n_params);
  st.m2 = RVector::Zero(n_params);
  st.eta = eta0;
  st.alpha = alpha;
  return st;
}

void adam_step(AdamState& state, Eigen::Ref<RVector> params,
               const RVector& grads) {
  if (params.size() != state.m1.size() || grads.size() != state.m1.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  state.t += 1;
  state.eta *= state.alpha;
  state.m1 = state.beta1 * state.m1 + (1.0 - state.beta1) * grads;
  state.m2 = state.beta2 * state.m2 +
             (1.0 - state.beta2) * grads.cwiseProduct(grads);
  const double c1 = 1.0 - std::pow(state.beta1, state.t);
  const double c2 = 1.0 - std::pow(state.beta2, state.t);
  RVector denom = (state.m2 / c2).cwiseSqrt();
  denom.array() += state.epsilon;
  params -= state.eta * (state.m1 / c1).cwiseQuotient(denom);
}

RVector pack_complex(const CMatrix& m) {
  RVector v(2 * m.size());
  Eigen::Map<const RVector> raw(reinterpret_cast<const double*>(m.data()),
                                2 * m.size());
  v = raw;
  return v;
}

void unpack_complex(const RVector& v, CMatrix& m) {
  if (v.size() != 2 * m.size()) {
    throw std::invalid_argument("unpack_complex: shape mismatch");
  }
  Eigen::Map<RVector> raw(reinterpret_cast<double*>(m.data()), 2 * m.size());
  raw = v;
}

std::vector<Batch> minibatches(int n_total, int batch_size, std::uint64_t seed,
                               int n_iters) {
  if (n_total < 1 || batch_size < 1 || batch_size > n_total) {
    throw std::invalid_argument(
        "minibatches: need 1 <= batch_size <= n_total");
  }
  if (n_iters < 0) {
    throw std::invalid_argument("minibatches: n_iters must be >= 0");
  }
  Rng rng(seed);
  std::vector<int> pool(n_total);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<Batch> out;
  out.reserve(n_iters);
  for (int t = 0; t < n_iters; ++t) {
    for (int j = 0; j < batch_size; ++j) {
      const int pick = j + static_cast<int>(rng.below(n_total - j));
      std::swap(pool[j], pool[pick]);
    }
    Batch b;
    b.indices.assign(pool.begin(), pool.begin() + batch_size);
    std::sort(b.indices.begin(), b.indices.end());
    out.push_back(std::move(b));
  }
  return out;
}

double default_eta0(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::cd:
    case AnsatzKind::cd_tri:
      return 1.0;
    case AnsatzKind::sm:
      return 0.3;
    case AnsatzKind::pn:
      return 1e-3;
  }
  return 1.0;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

ReconstructionResult reconstruct(const DataSet& data, const ObservableSet& set,
                                 const RunConfig& cfg,
                                 const DensityMatrix* truth,
                                 const RecordObserver& observer) {
  validate_dataset(data, set);
  if (cfg.max_iters < 1) {
    throw std::invalid_argument("reconstruct: max_iters must be >= 1");
  }
  if (cfg.batch_size < 1 || cfg.batch_size > data.size()) {
    throw std::invalid_argument(
        "reconstruct: batch_size must satisfy 1 <= batch_size <= |data|");
  }
  if (cfg.record_every < 1) {
    throw std::invalid_argument("reconstruct: record_every must be >= 1");
  }
  if (cfg.fidelity_target > 0.0 && truth == nullptr) {
    throw std::invalid_argument("reconstruct: fidelity target requires truth");
  }
  if (truth != nullptr && truth->dim() != set.dim()) {
    throw std::invalid_argument("reconstruct: truth dimension mismatch");
  }

  const double eta0 = cfg.eta0 > 0.0 ? cfg.eta0 : default_eta0(cfg.kind);
  const LossConfig loss_cfg{cfg.lambda_l1};
  const Batch full = full_batch(data.size());

  Ansatz ansatz = init_ansatz(cfg.kind, set.dim(), cfg.rank, cfg.seed);
  const std::vector<Batch> batches = minibatches(
      static_cast<int>(data.size()), cfg.batch_size,
      mix_seed(cfg.seed, 1), cfg.max_iters);

  AdamState adam;
  if (cfg.kind != AnsatzKind::sm) {
    const Index n = std::visit(
        [](const auto& a) -> Index {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, CholeskyAnsatz>) {
            return 2 * a.factor.size();
          } else if constexpr (std::is_same_v<T, PNAnsatz>) {
            return a.weights.size() + 2 * a.states.size();
          } else {
            return 0;
          }
        },
        ansatz);
    adam = make_adam(n, eta0, cfg.alpha);
  }
  double eta_sm = eta0;

  ReconstructionResult result;
  result.config = cfg;
  result.config.eta0 = eta0;

  const auto t_start = Clock::now();
  double work_seconds = 0.0;
  bool stop = false;

  auto record = [&](int iter, const CMatrix& rho) {
    result.recorded_iters.push_back(iter);
    result.loss_trace.push_back(loss(rho, data, set, full, loss_cfg));
    if (truth != nullptr) {
      result.fidelity_trace.push_back(uj_fidelity(rho, truth->entries));
    }
    result.time_trace.push_back(seconds_since(t_start));
    if (observer) observer(iter, rho);
    if (cfg.fidelity_target > 0.0 &&
        result.fidelity_trace.back() >= cfg.fidelity_target) {
      stop = true;
    }
    if (cfg.early_stop) {
      // Plateau check against the most recent record >= 50 iterations back.
      const auto& its = result.recorded_iters;
      for (Index k = static_cast<Index>(its.size()) - 1; k >= 0; --k) {
        if (its[k] <= iter - 50) {
          if (std::abs(result.loss_trace.back() - result.loss_trace[k]) <
              1e-10) {
            stop = true;
          }
          break;
        }
      }
    }
  };

  for (int t = 1; t <= cfg.max_iters && !stop; ++t) {
    const auto t_iter = Clock::now();
    const Batch& batch = batches[t - 1];
    switch (cfg.kind) {
      case AnsatzKind::cd:
      case AnsatzKind::cd_tri: {
        auto& a = std::get<CholeskyAnsatz>(ansatz);
        const CMatrix g = grad_cd(a, data, set, batch, loss_cfg);
        RVector params = pack_complex(a.factor);
        adam_step(adam, params, pack_complex(g));
        unpack_complex(params, a.factor);
        if (a.triangular) {
          a.factor.triangularView<Eigen::StrictlyUpper>().setZero();
        }
        break;
      }
      case AnsatzKind::pn: {
        auto& a = std::get<PNAnsatz>(ansatz);
        const PNGradient g = grad_pn(a, data, set, batch, loss_cfg);
        const Index m = a.rank;
        RVector params(m + 2 * a.states.size());
        params.head(m) = a.weights;
        params.tail(2 * a.states.size()) = pack_complex(a.states);
        RVector grads(params.size());
        grads.head(m) = g.weights;
        grads.tail(2 * a.states.size()) = pack_complex(g.states);
        adam_step(adam, params, grads);
        CMatrix raw_states(m, a.dim);
        unpack_complex(params.tail(2 * a.states.size()), raw_states);
        a = pn_project(params.head(m), raw_states);
        break;
      }
      case AnsatzKind::sm: {
        auto& a = std::get<StiefelAnsatz>(ansatz);
        const CVector g = grad_sm(a, data, set, batch, loss_cfg);
        if (g.norm() <= 1e-30) {
          result.converged_early = true;
          work_seconds += seconds_since(t_iter);
          result.iterations_run = t;
          record(t, sm_matrix(a));
          stop = true;
          continue;
        }
        eta_sm *= cfg.alpha;
        a = sm_retract_step(a, g, eta_sm);
        if (t % 100 == 0) {
          a.stacked /= a.stacked.norm();  // absorb floating-point drift
        }
        break;
      }
    }
    work_seconds += seconds_since(t_iter);
    result.iterations_run = t;
    if (t % cfg.record_every == 0 || t == cfg.max_iters) {
      record(t, induced_matrix(ansatz));
    }
  }

  result.seconds_reconstruct = work_seconds;
  result.rho = make_density(induced_matrix(ansatz));
  result.seconds_total = seconds_since(t_start);
  return result;
}

}  // namespace qst

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qst/optimize.hpp"
#include "qst/types.hpp"

namespace qst {

enum class ExperimentKind {
  reconstruct,
  bench_time,
  bench_rank,
  bench_data,
  bench_noise,
  cv_cat,
  sweep_hyper,
};

enum class Method { cd, cd_tri, sm, pn, linear_inversion, imle };

std::string to_string(ExperimentKind kind);
std::string to_string(Method method);
ExperimentKind experiment_from_string(const std::string& s);
Method method_from_string(const std::string& s);

/// Target-state description. type is one of ghz | hadamard | random |
/// random-pure | cat. Discrete-variable types use n_qubits; cat uses dim
/// and xi (for multi-trial runs the phase of xi is randomized per trial,
/// keeping |xi| fixed).
struct StateSpec {
  std::string type = "random";
  int n_qubits = 2;
  Index dim = 32;
  Index rank = 0;  // 0 = full rank (random type)
  Complex xi = {2.0, 0.0};
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::reconstruct;
  StateSpec state;
  std::vector<Method> methods = {Method::cd};
  int trials = 10;
  RunConfig run;  // per-reconstruction settings (seed is the spec seed)
  std::string out_dir = "out";
  double fidelity_target = 0.99;
  int threads = 1;

  std::vector<int> qubit_counts = {2, 3};        // bench-time
  std::vector<Index> state_ranks;                 // bench-rank (empty = {1, full})
  std::vector<Index> ansatz_ranks;                // bench-rank
  std::vector<Index> data_sizes;                  // bench-data
  int resamples = 15;                             // bench-data
  std::string noise_kind = "depolarizing";        // bench-noise
  std::vector<double> noise_levels = {0.0, 0.25, 0.5};  // eps or sigma^2
  double extent = 4.0;                            // cv-cat husimi grid
  int grid_steps = 32;
  int imle_iters = 5000;
  double wigner_extent = 4.0;                     // cv-cat wigner grids
  int wigner_steps = 64;
  std::vector<int> batch_sizes = {64, 256, 512};  // sweep-hyper
  std::vector<double> step_sizes = {0.5, 1.0, 2.0};
};

/// One completed (or aborted) trial. Aborted trials carry the diagnostic in
/// `error` and leave the numeric fields at their defaults.
struct BenchRecord {
  std::string experiment;
  std::string method;
  std::string state_desc;
  Index state_rank = 0;
  Index ansatz_rank = 0;
  int trial = 0;
  std::uint64_t trial_seed = 0;
  double fidelity = 0.0;
  int iterations = 0;
  double wall_seconds = 0.0;         // reconstruction + fidelity recording
  double reconstruct_seconds = 0.0;  // optimizer work only
  double seconds_per_iter = 0.0;
  int batch_size = 0;
  double eta0 = 0.0;
  Index data_size = 0;
  double noise_eps = 0.0;
  double noise_sigma2 = 0.0;
  std::string error;
};

/// Runs the experiment, writing one CSV per (experiment, method), a
/// manifest.json echoing the spec, and any per-kind artifacts (traces,
/// Wigner grids, density matrices) under spec.out_dir. Trial seeds are
/// spec.run.seed + trial index; trials run on a bounded worker pool with
/// records ordered by trial index. Returns every record; `error` fields
/// signal aborted trials (the run continues past them).
std::vector<BenchRecord> run_experiment(const ExperimentSpec& spec);

}  // namespace qst

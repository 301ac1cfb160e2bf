#include "qst/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qst/baseline.hpp"
#include "qst/measurement.hpp"
#include "qst/metrics.hpp"
#include "qst/rng.hpp"
#include "qst/serialize.hpp"
#include "qst/states.hpp"

namespace qst {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::reconstruct: return "reconstruct";
    case ExperimentKind::bench_time: return "bench-time";
    case ExperimentKind::bench_rank: return "bench-rank";
    case ExperimentKind::bench_data: return "bench-data";
    case ExperimentKind::bench_noise: return "bench-noise";
    case ExperimentKind::cv_cat: return "cv-cat";
    case ExperimentKind::sweep_hyper: return "sweep-hyper";
  }
  return "?";
}

std::string to_string(Method method) {
  switch (method) {
    case Method::cd: return "cd";
    case Method::cd_tri: return "cd-tri";
    case Method::sm: return "sm";
    case Method::pn: return "pn";
    case Method::linear_inversion: return "linear-inversion";
    case Method::imle: return "imle";
  }
  return "?";
}

ExperimentKind experiment_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::reconstruct, ExperimentKind::bench_time,
                 ExperimentKind::bench_rank, ExperimentKind::bench_data,
                 ExperimentKind::bench_noise, ExperimentKind::cv_cat,
                 ExperimentKind::sweep_hyper}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown experiment kind: " + s);
}

Method method_from_string(const std::string& s) {
  for (auto m : {Method::cd, Method::cd_tri, Method::sm, Method::pn,
                 Method::linear_inversion, Method::imle}) {
    if (to_string(m) == s) return m;
  }
  throw std::invalid_argument("unknown method: " + s);
}

namespace {

using Clock = std::chrono::steady_clock;

AnsatzKind ansatz_kind(Method m) {
  switch (m) {
    case Method::cd: return AnsatzKind::cd;
    case Method::cd_tri: return AnsatzKind::cd_tri;
    case Method::sm: return AnsatzKind::sm;
    case Method::pn: return AnsatzKind::pn;
    default:
      throw std::invalid_argument("not a gradient-descent method");
  }
}

bool is_gd(Method m) {
  return m == Method::cd || m == Method::cd_tri || m == Method::sm ||
         m == Method::pn;
}

struct Target {
  DensityMatrix rho;
  Index rank = 0;
  std::string desc;
};

Target make_target(const StateSpec& state, std::uint64_t trial_seed,
                   int trial) {
  Target t;
  std::ostringstream desc;
  if (state.type == "ghz") {
    t.rho = projector(ghz_state(state.n_qubits));
    t.rank = 1;
    desc << "ghz-n" << state.n_qubits;
  } else if (state.type == "hadamard") {
    t.rho = projector(hadamard_state(state.n_qubits));
    t.rank = 1;
    desc << "hadamard-n" << state.n_qubits;
  } else if (state.type == "random") {
    const Index d = Index(1) << state.n_qubits;
    const Index r = state.rank > 0 ? state.rank : d;
    t.rho = random_density(d, r, trial_seed);
    t.rank = r;
    desc << "random-n" << state.n_qubits << "-r" << r;
  } else if (state.type == "random-pure") {
    const Index d = Index(1) << state.n_qubits;
    t.rho = random_density(d, 1, trial_seed);
    t.rank = 1;
    desc << "random-pure-n" << state.n_qubits;
  } else if (state.type == "cat") {
    Complex xi = state.xi;
    if (trial > 0) {
      // Keep |xi| fixed and randomize the phase across trials.
      Rng rng(mix_seed(trial_seed, 7));
      const double phi = 2.0 * M_PI * rng.uniform();
      xi = std::abs(state.xi) * Complex(std::cos(phi), std::sin(phi));
    }
    t.rho = projector(cat_state(xi, state.dim));
    t.rank = 1;
    desc << "cat-d" << state.dim << "-xi" << std::abs(state.xi);
  } else {
    throw std::invalid_argument("unknown state type: " + state.type);
  }
  t.desc = desc.str();
  return t;
}

RunConfig trial_config(const ExperimentSpec& spec, Method method, Index rank,
                       std::uint64_t seed, Index data_size,
                       double fidelity_target) {
  RunConfig cfg = spec.run;
  cfg.kind = ansatz_kind(method);
  cfg.rank = rank;
  cfg.seed = seed;
  cfg.fidelity_target = fidelity_target;
  cfg.batch_size = static_cast<int>(
      std::min<Index>(cfg.batch_size, data_size));
  return cfg;
}

void fill_from_result(BenchRecord& rec, const ReconstructionResult& res,
                      const DensityMatrix& truth) {
  rec.fidelity = uj_fidelity(res.rho, truth);
  rec.iterations = res.iterations_run;
  rec.wall_seconds = res.seconds_total;
  rec.reconstruct_seconds = res.seconds_reconstruct;
  rec.seconds_per_iter =
      res.iterations_run > 0 ? res.seconds_reconstruct / res.iterations_run
                             : 0.0;
  rec.batch_size = res.config.batch_size;
  rec.eta0 = res.config.eta0;
}

void run_linear_inversion(BenchRecord& rec, const DataSet& data,
                          const ObservableSet& set,
                          const DensityMatrix& truth) {
  const auto t0 = Clock::now();
  const CMatrix est = linear_inversion(data, set);
  rec.reconstruct_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  rec.fidelity = uj_fidelity(est, truth.entries);
  rec.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  rec.iterations = 0;
  rec.ansatz_rank = set.dim();
}

// Runs every job on a bounded pool; records land at their job index, so CSV
// order never depends on scheduling.
std::vector<BenchRecord> run_jobs(
    const std::vector<std::function<BenchRecord()>>& jobs, int threads) {
  std::vector<BenchRecord> records(jobs.size());
  const int n = static_cast<int>(jobs.size());
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) records[i] = jobs[i]();
    return records;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        records[i] = jobs[i]();
      }
    });
  }
  for (auto& th : pool) th.join();
  return records;
}

std::function<BenchRecord()> guarded(BenchRecord base,
                                     std::function<void(BenchRecord&)> body) {
  return [base = std::move(base), body = std::move(body)]() {
    BenchRecord rec = base;
    try {
      body(rec);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    return rec;
  };
}

void write_records_csv(const fs::path& path,
                       const std::vector<BenchRecord>& records) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "experiment,method,state,state_rank,ansatz_rank,trial,seed,"
        "batch_size,eta0,data_size,noise_eps,noise_sigma2,fidelity,"
        "iterations,wall_s,reconstruct_s,s_per_iter,error\n";
  for (const auto& r : records) {
    os << r.experiment << "," << r.method << "," << r.state_desc << ","
       << r.state_rank << "," << r.ansatz_rank << "," << r.trial << ","
       << r.trial_seed << "," << r.batch_size << ","
       << format_double(r.eta0) << "," << r.data_size << ","
       << format_double(r.noise_eps) << "," << format_double(r.noise_sigma2)
       << "," << format_double(r.fidelity) << "," << r.iterations << ","
       << format_double(r.wall_seconds) << ","
       << format_double(r.reconstruct_seconds) << ","
       << format_double(r.seconds_per_iter) << "," << r.error << "\n";
  }
}

// Mean/std fidelity grouped by a numeric key (data size or noise level).
void write_summary_csv(const fs::path& path, const std::string& key_name,
                       const std::vector<std::pair<double, double>>& rows) {
  // rows: (key, fidelity), already filtered to one method.
  std::map<double, std::vector<double>> groups;
  for (const auto& [k, f] : rows) groups[k].push_back(f);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << key_name << ",mean_fidelity,std_fidelity,n\n";
  for (const auto& [k, v] : groups) {
    double mean = 0.0;
    for (double f : v) mean += f;
    mean /= v.size();
    double var = 0.0;
    for (double f : v) var += (f - mean) * (f - mean);
    const double sd = v.size() > 1 ? std::sqrt(var / (v.size() - 1)) : 0.0;
    os << format_double(k) << "," << format_double(mean) << ","
       << format_double(sd) << "," << v.size() << "\n";
  }
}

void write_manifest(const ExperimentSpec& spec, const fs::path& dir) {
  json j;
  j["experiment"] = to_string(spec.kind);
  j["state"] = {{"type", spec.state.type},
                {"n_qubits", spec.state.n_qubits},
                {"dim", spec.state.dim},
                {"rank", spec.state.rank},
                {"xi_re", spec.state.xi.real()},
                {"xi_im", spec.state.xi.imag()}};
  std::vector<std::string> methods;
  for (auto m : spec.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  j["trials"] = spec.trials;
  j["threads"] = spec.threads;
  j["fidelity_target"] = spec.fidelity_target;
  j["run"] = {{"rank", spec.run.rank},
              {"max_iters", spec.run.max_iters},
              {"batch_size", spec.run.batch_size},
              {"eta0", spec.run.eta0},
              {"alpha", spec.run.alpha},
              {"lambda_l1", spec.run.lambda_l1},
              {"seed", spec.run.seed},
              {"record_every", spec.run.record_every},
              {"early_stop", spec.run.early_stop}};
  j["qubit_counts"] = spec.qubit_counts;
  j["state_ranks"] = spec.state_ranks;
  j["ansatz_ranks"] = spec.ansatz_ranks;
  j["data_sizes"] = spec.data_sizes;
  j["resamples"] = spec.resamples;
  j["noise_kind"] = spec.noise_kind;
  j["noise_levels"] = spec.noise_levels;
  j["extent"] = spec.extent;
  j["grid_steps"] = spec.grid_steps;
  j["imle_iters"] = spec.imle_iters;
  j["wigner_extent"] = spec.wigner_extent;
  j["wigner_steps"] = spec.wigner_steps;
  j["batch_sizes"] = spec.batch_sizes;
  j["step_sizes"] = spec.step_sizes;
  std::ofstream os(dir / "manifest.json");
  os << j.dump(2) << "\n";
}

BenchRecord base_record(const ExperimentSpec& spec, Method method,
                        const std::string& state_desc, Index state_rank,
                        int trial, std::uint64_t seed) {
  BenchRecord r;
  r.experiment = to_string(spec.kind);
  r.method = to_string(method);
  r.state_desc = state_desc;
  r.state_rank = state_rank;
  r.trial = trial;
  r.trial_seed = seed;
  return r;
}

// imle with per-record fidelity/time traces (used by cv-cat).
ReconstructionResult imle_with_trace(const DataSet& data,
                                     const ObservableSet& set, int max_iters,
                                     int record_every,
                                     const DensityMatrix& truth,
                                     double fidelity_target) {
  ReconstructionResult res;
  const Index d = set.dim();
  CMatrix rho = CMatrix::Identity(d, d) / static_cast<double>(d);
  const auto t0 = Clock::now();
  double work = 0.0;
  const Batch full = full_batch(data.size());
  for (int t = 1; t <= max_iters; ++t) {
    const auto ti = Clock::now();
    rho = imle_iterate(rho, data, set);
    work += std::chrono::duration<double>(Clock::now() - ti).count();
    res.iterations_run = t;
    if (t % record_every == 0 || t == max_iters) {
      res.recorded_iters.push_back(t);
      res.loss_trace.push_back(loss(rho, data, set, full, LossConfig{}));
      res.fidelity_trace.push_back(uj_fidelity(rho, truth.entries));
      res.time_trace.push_back(
          std::chrono::duration<double>(Clock::now() - t0).count());
      if (fidelity_target > 0.0 &&
          res.fidelity_trace.back() >= fidelity_target) {
        break;
      }
    }
  }
  res.seconds_reconstruct = work;
  res.seconds_total = std::chrono::duration<double>(Clock::now() - t0).count();
  res.rho = make_density(rho);
  return res;
}

}  // namespace

std::vector<BenchRecord> run_experiment(const ExperimentSpec& spec) {
  if (spec.methods.empty()) {
    throw std::invalid_argument("run_experiment: empty method list");
  }
  if (spec.trials < 1) {
    throw std::invalid_argument("run_experiment: trials must be >= 1");
  }
  const fs::path dir(spec.out_dir);
  fs::create_directories(dir);
  write_manifest(spec, dir);

  std::vector<std::function<BenchRecord()>> jobs;
  const std::uint64_t base_seed = spec.run.seed;

  switch (spec.kind) {
    case ExperimentKind::reconstruct: {
      try {
        const Target first = make_target(spec.state, base_seed, 0);
        save_density(dir / "rho_truth.txt", first.rho.entries);
      } catch (const std::exception&) {
        // Bad state specs surface as per-trial errors below.
      }
      for (int trial = 0; trial < spec.trials; ++trial) {
        const std::uint64_t seed = base_seed + trial;
        for (Method method : spec.methods) {
          jobs.push_back(guarded(
              base_record(spec, method, "", 0, trial, seed),
              [&spec, method, trial, seed, dir](BenchRecord& rec) {
                const Target target = make_target(spec.state, seed, trial);
                rec.state_desc = target.desc;
                rec.state_rank = target.rank;
                const bool cv = spec.state.type == "cat";
                const ObservableSet set =
                    cv ? husimi_set(spec.extent, spec.grid_steps,
                                    spec.state.dim)
                       : pauli_set(spec.state.n_qubits);
                const DataSet data = measure(target.rho, set);
                rec.data_size = data.size();
                const Index rank =
                    spec.run.rank > 0 ? spec.run.rank : target.rank;
                rec.ansatz_rank = rank;
                ReconstructionResult res;
                if (method == Method::linear_inversion) {
                  run_linear_inversion(rec, data, set, target.rho);
                } else if (method == Method::imle) {
                  res = imle_with_trace(data, set, spec.imle_iters,
                                        spec.run.record_every, target.rho,
                                        spec.fidelity_target);
                  fill_from_result(rec, res, target.rho);
                } else {
                  const RunConfig cfg =
                      trial_config(spec, method, rank, seed, data.size(),
                                   spec.fidelity_target);
                  res = reconstruct(data, set, cfg, &target.rho);
                  fill_from_result(rec, res, target.rho);
                }
                if (trial == 0 && method != Method::linear_inversion) {
                  const std::string m = to_string(method);
                  save_result(dir / ("trace_" + m + ".csv"), res);
                  save_density(dir / ("rho_" + m + ".txt"), res.rho.entries);
                }
              }));
        }
      }
      break;
    }

    case ExperimentKind::bench_time: {
      for (int n : spec.qubit_counts) {
        for (int trial = 0; trial < spec.trials; ++trial) {
          const std::uint64_t seed = base_seed + trial;
          for (Method method : spec.methods) {
            jobs.push_back(guarded(
                base_record(spec, method, "", 0, trial, seed),
                [&spec, method, n, trial, seed](BenchRecord& rec) {
                  StateSpec st = spec.state;
                  st.n_qubits = n;
                  const Target target = make_target(st, seed, trial);
                  rec.state_desc = target.desc;
                  rec.state_rank = target.rank;
                  const ObservableSet set = pauli_set(n);
                  const DataSet data = measure(target.rho, set);
                  rec.data_size = data.size();
                  if (method == Method::linear_inversion) {
                    run_linear_inversion(rec, data, set, target.rho);
                    return;
                  }
                  const Index rank = method == Method::cd_tri
                                         ? set.dim()
                                         : target.rank;
                  rec.ansatz_rank = rank;
                  const RunConfig cfg =
                      trial_config(spec, method, rank, seed, data.size(),
                                   spec.fidelity_target);
                  const ReconstructionResult res =
                      reconstruct(data, set, cfg, &target.rho);
                  fill_from_result(rec, res, target.rho);
                }));
          }
        }
      }
      break;
    }

    case ExperimentKind::bench_rank: {
      const Index d = Index(1) << spec.state.n_qubits;
      std::vector<std::pair<Index, Index>> combos;  // (state rank, ansatz rank)
      if (spec.ansatz_ranks.empty()) {
        std::vector<Index> ranks = spec.state_ranks;
        if (ranks.empty()) {
          for (Index r = 1; r <= d; r *= 2) ranks.push_back(r);
        }
        for (Index r : ranks) combos.emplace_back(r, r);
      } else {
        std::vector<Index> sranks =
            spec.state_ranks.empty() ? std::vector<Index>{1} : spec.state_ranks;
        for (Index sr : sranks) {
          for (Index ar : spec.ansatz_ranks) combos.emplace_back(sr, ar);
        }
      }
      for (const auto& [state_rank, ansatz_rank] : combos) {
        for (int trial = 0; trial < spec.trials; ++trial) {
          const std::uint64_t seed = base_seed + trial;
          for (Method method : spec.methods) {
            if (!is_gd(method)) continue;  // rank sweeps are a GD feature
            jobs.push_back(guarded(
                base_record(spec, method, "", 0, trial, seed),
                [&spec, method, state_rank = state_rank,
                 ansatz_rank = ansatz_rank, trial, seed](BenchRecord& rec) {
                  StateSpec st = spec.state;
                  st.type = "random";
                  st.rank = state_rank;
                  const Target target = make_target(st, seed, trial);
                  rec.state_desc = target.desc;
                  rec.state_rank = state_rank;
                  rec.ansatz_rank = ansatz_rank;
                  const ObservableSet set = pauli_set(spec.state.n_qubits);
                  const DataSet data = measure(target.rho, set);
                  rec.data_size = data.size();
                  const RunConfig cfg =
                      trial_config(spec, method, ansatz_rank, seed,
                                   data.size(), spec.fidelity_target);
                  const ReconstructionResult res =
                      reconstruct(data, set, cfg, &target.rho);
                  fill_from_result(rec, res, target.rho);
                }));
          }
        }
      }
      break;
    }

    case ExperimentKind::bench_data: {
      std::vector<Index> sizes = spec.data_sizes;
      if (sizes.empty()) {
        const Index full = Index(1) << (2 * spec.state.n_qubits);
        const Index step = std::max<Index>(1, full / 8);
        for (Index s = step; s <= full; s += step) sizes.push_back(s);
      }
      for (Index size : sizes) {
        for (int trial = 0; trial < spec.resamples; ++trial) {
          const std::uint64_t seed = base_seed + trial;
          for (Method method : spec.methods) {
            jobs.push_back(guarded(
                base_record(spec, method, "", 0, trial, seed),
                [&spec, method, size, trial, seed](BenchRecord& rec) {
                  // Same target across resamples; only the subsample varies.
                  const Target target = make_target(spec.state, spec.run.seed, 0);
                  rec.state_desc = target.desc;
                  rec.state_rank = target.rank;
                  const ObservableSet set = pauli_set(spec.state.n_qubits);
                  const DataSet full_data = measure(target.rho, set);
                  const DataSet data = subsample(
                      full_data, size, mix_seed(seed, 1000 + size), true);
                  rec.data_size = size;
                  if (method == Method::linear_inversion) {
                    run_linear_inversion(rec, data, set, target.rho);
                    return;
                  }
                  const Index rank = spec.run.rank > 0 ? spec.run.rank : 1;
                  rec.ansatz_rank = rank;
                  const RunConfig cfg = trial_config(spec, method, rank, seed,
                                                     data.size(), 0.0);
                  const ReconstructionResult res =
                      reconstruct(data, set, cfg, &target.rho);
                  fill_from_result(rec, res, target.rho);
                }));
          }
        }
      }
      break;
    }

    case ExperimentKind::bench_noise: {
      const bool depol = spec.noise_kind == "depolarizing";
      if (!depol && spec.noise_kind != "gaussian") {
        throw std::invalid_argument("bench-noise: noise kind must be "
                                    "depolarizing or gaussian");
      }
      for (double level : spec.noise_levels) {
        for (int trial = 0; trial < spec.trials; ++trial) {
          const std::uint64_t seed = base_seed + trial;
          for (Method method : spec.methods) {
            jobs.push_back(guarded(
                base_record(spec, method, "", 0, trial, seed),
                [&spec, method, level, depol, trial, seed](BenchRecord& rec) {
                  const Target target = make_target(spec.state, seed, trial);
                  rec.state_desc = target.desc;
                  rec.state_rank = target.rank;
                  const ObservableSet set = pauli_set(spec.state.n_qubits);
                  DataSet data;
                  if (depol) {
                    rec.noise_eps = level;
                    data = measure(depolarize(target.rho, level), set);
                  } else {
                    rec.noise_sigma2 = level;
                    data = gaussian_noise(measure(target.rho, set),
                                          std::sqrt(level),
                                          mix_seed(seed, 11));
                  }
                  rec.data_size = data.size();
                  if (method == Method::linear_inversion) {
                    run_linear_inversion(rec, data, set, target.rho);
                    return;
                  }
                  const Index rank = spec.run.rank > 0 ? spec.run.rank : 1;
                  rec.ansatz_rank = rank;
                  const RunConfig cfg = trial_config(spec, method, rank, seed,
                                                     data.size(), 0.0);
                  // Fidelity is measured against the ORIGINAL (noiseless)
                  // state.
                  const ReconstructionResult res =
                      reconstruct(data, set, cfg, &target.rho);
                  fill_from_result(rec, res, target.rho);
                }));
          }
        }
      }
      break;
    }

    case ExperimentKind::cv_cat: {
      try {
        StateSpec st = spec.state;
        st.type = "cat";
        const Target first = make_target(st, base_seed, 0);
        save_density(dir / "rho_truth.txt", first.rho.entries);
        save_phase_grid(
            dir / "wigner_truth.csv",
            wigner(first.rho, spec.wigner_extent, spec.wigner_steps));
      } catch (const std::exception&) {
      }
      for (int trial = 0; trial < spec.trials; ++trial) {
        const std::uint64_t seed = base_seed + trial;
        for (Method method : spec.methods) {
          if (method == Method::linear_inversion) continue;
          jobs.push_back(guarded(
              base_record(spec, method, "", 0, trial, seed),
              [&spec, method, trial, seed, dir](BenchRecord& rec) {
                StateSpec st = spec.state;
                st.type = "cat";
                const Target target = make_target(st, seed, trial);
                rec.state_desc = target.desc;
                rec.state_rank = target.rank;
                const ObservableSet set =
                    husimi_set(spec.extent, spec.grid_steps, spec.state.dim);
                const DataSet data = measure(target.rho, set);
                rec.data_size = data.size();
                ReconstructionResult res;
                if (method == Method::imle) {
                  res = imle_with_trace(data, set, spec.imle_iters,
                                        spec.run.record_every, target.rho,
                                        spec.fidelity_target);
                  rec.ansatz_rank = set.dim();
                } else {
                  const Index rank = spec.run.rank > 0 ? spec.run.rank : 1;
                  rec.ansatz_rank = rank;
                  const RunConfig cfg =
                      trial_config(spec, method, rank, seed, data.size(),
                                   spec.fidelity_target);
                  res = reconstruct(data, set, cfg, &target.rho);
                }
                fill_from_result(rec, res, target.rho);
                if (trial == 0) {
                  const std::string m = to_string(method);
                  save_result(dir / ("trace_" + m + ".csv"), res);
                  save_density(dir / ("rho_" + m + ".txt"), res.rho.entries);
                  save_phase_grid(
                      dir / ("wigner_" + m + ".csv"),
                      wigner(res.rho, spec.wigner_extent, spec.wigner_steps));
                }
              }));
        }
      }
      break;
    }

    case ExperimentKind::sweep_hyper: {
      for (int bs : spec.batch_sizes) {
        for (double eta : spec.step_sizes) {
          for (int trial = 0; trial < spec.trials; ++trial) {
            const std::uint64_t seed = base_seed + trial;
            for (Method method : spec.methods) {
              if (!is_gd(method)) continue;
              jobs.push_back(guarded(
                  base_record(spec, method, "", 0, trial, seed),
                  [&spec, method, bs, eta, trial, seed](BenchRecord& rec) {
                    const Target target = make_target(spec.state, seed, trial);
                    rec.state_desc = target.desc;
                    rec.state_rank = target.rank;
                    const ObservableSet set = pauli_set(spec.state.n_qubits);
                    const DataSet data = measure(target.rho, set);
                    rec.data_size = data.size();
                    const Index rank =
                        spec.run.rank > 0 ? spec.run.rank : target.rank;
                    rec.ansatz_rank = rank;
                    RunConfig cfg =
                        trial_config(spec, method, rank, seed, data.size(),
                                     spec.fidelity_target);
                    cfg.batch_size = static_cast<int>(
                        std::min<Index>(bs, data.size()));
                    cfg.eta0 = eta;
                    const ReconstructionResult res =
                        reconstruct(data, set, cfg, &target.rho);
                    fill_from_result(rec, res, target.rho);
                  }));
            }
          }
        }
      }
      break;
    }
  }

  std::vector<BenchRecord> records = run_jobs(jobs, spec.threads);

  // One CSV per (experiment, method).
  for (Method method : spec.methods) {
    std::vector<BenchRecord> mine;
    for (const auto& r : records) {
      if (r.method == to_string(method)) mine.push_back(r);
    }
    if (mine.empty()) continue;
    const std::string name = to_string(spec.kind) + "_" + to_string(method);
    write_records_csv(dir / (name + ".csv"), mine);
    if (spec.kind == ExperimentKind::bench_data) {
      std::vector<std::pair<double, double>> rows;
      for (const auto& r : mine) {
        if (r.error.empty()) rows.emplace_back(r.data_size, r.fidelity);
      }
      write_summary_csv(dir / (name + "_summary.csv"), "data_size", rows);
    } else if (spec.kind == ExperimentKind::bench_noise) {
      std::vector<std::pair<double, double>> rows;
      for (const auto& r : mine) {
        if (r.error.empty()) {
          rows.emplace_back(r.noise_eps + r.noise_sigma2, r.fidelity);
        }
      }
      write_summary_csv(dir / (name + "_summary.csv"), "noise_level", rows);
    }
  }
  return records;
}

}  // namespace qst

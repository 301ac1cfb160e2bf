// Command-line harness for density-matrix reconstruction benchmarks.
//
// Subcommands: reconstruct | bench-time | bench-rank | bench-data |
// bench-noise | cv-cat | sweep-hyper. A JSON config file can supply any
// option; explicit flags override it. Exit code is 0 on success and 1 when
// any trial aborted.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qst/harness.hpp"

namespace {

using nlohmann::json;
using qst::ExperimentSpec;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Applies config-file values for every option the user did not pass
// explicitly, so flags always win over the file.
void merge_config_file(const std::string& path, const CLI::App& sub,
                       ExperimentSpec& spec, std::string& methods_csv) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path);
  json j;
  is >> j;
  const auto fresh = [&sub](const char* flag) {
    return sub.count(flag) == 0;
  };
  const auto set_if = [&](const char* flag, const char* key, auto&& target) {
    if (fresh(flag) && j.contains(key)) {
      target = j[key].get<std::decay_t<decltype(target)>>();
    }
  };
  set_if("--seed", "seed", spec.run.seed);
  set_if("--out-dir", "out_dir", spec.out_dir);
  set_if("--trials", "trials", spec.trials);
  set_if("--threads", "threads", spec.threads);
  set_if("--max-iters", "max_iters", spec.run.max_iters);
  set_if("--batch-size", "batch_size", spec.run.batch_size);
  set_if("--eta0", "eta0", spec.run.eta0);
  set_if("--alpha", "alpha", spec.run.alpha);
  set_if("--lambda", "lambda_l1", spec.run.lambda_l1);
  set_if("--rank", "rank", spec.run.rank);
  set_if("--record-every", "record_every", spec.run.record_every);
  set_if("--fidelity-target", "fidelity_target", spec.fidelity_target);
  set_if("--early-stop", "early_stop", spec.run.early_stop);
  set_if("--methods", "methods", methods_csv);
  set_if("--state", "state", spec.state.type);
  set_if("--qubits", "qubits", spec.state.n_qubits);
  set_if("--dim", "dim", spec.state.dim);
  set_if("--state-rank", "state_rank", spec.state.rank);
  set_if("--qubit-counts", "qubit_counts", spec.qubit_counts);
  set_if("--state-ranks", "state_ranks", spec.state_ranks);
  set_if("--ansatz-ranks", "ansatz_ranks", spec.ansatz_ranks);
  set_if("--sizes", "data_sizes", spec.data_sizes);
  set_if("--resamples", "resamples", spec.resamples);
  set_if("--noise", "noise_kind", spec.noise_kind);
  set_if("--levels", "noise_levels", spec.noise_levels);
  set_if("--extent", "extent", spec.extent);
  set_if("--grid-steps", "grid_steps", spec.grid_steps);
  set_if("--imle-iters", "imle_iters", spec.imle_iters);
  set_if("--wigner-extent", "wigner_extent", spec.wigner_extent);
  set_if("--wigner-steps", "wigner_steps", spec.wigner_steps);
  set_if("--batch-sizes", "batch_sizes", spec.batch_sizes);
  set_if("--eta0s", "step_sizes", spec.step_sizes);
  if (fresh("--xi-abs") && fresh("--xi-phase") && j.contains("xi_re") &&
      j.contains("xi_im")) {
    spec.state.xi = {j["xi_re"].get<double>(), j["xi_im"].get<double>()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-descent quantum state tomography benchmarks"};
  app.require_subcommand(1);

  ExperimentSpec spec;
  std::string config_path;
  std::string methods_csv = "cd";
  double xi_abs = 2.0;
  double xi_phase = 0.0;

  const std::map<std::string, qst::ExperimentKind> kinds = {
      {"reconstruct", qst::ExperimentKind::reconstruct},
      {"bench-time", qst::ExperimentKind::bench_time},
      {"bench-rank", qst::ExperimentKind::bench_rank},
      {"bench-data", qst::ExperimentKind::bench_data},
      {"bench-noise", qst::ExperimentKind::bench_noise},
      {"cv-cat", qst::ExperimentKind::cv_cat},
      {"sweep-hyper", qst::ExperimentKind::sweep_hyper},
  };

  for (const auto& [name, kind] : kinds) {
    CLI::App* sub = app.add_subcommand(name, "");
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", spec.run.seed, "base seed");
    sub->add_option("--out-dir", spec.out_dir, "output directory");
    sub->add_option("--trials", spec.trials, "trials per configuration");
    sub->add_option("--threads", spec.threads, "worker threads");
    sub->add_option("--max-iters", spec.run.max_iters, "iteration cap");
    sub->add_option("--batch-size", spec.run.batch_size, "mini-batch size");
    sub->add_option("--eta0", spec.run.eta0,
                    "initial step size (0 = per-method default)");
    sub->add_option("--alpha", spec.run.alpha, "step-size decay rate");
    sub->add_option("--lambda", spec.run.lambda_l1, "L1 regularization");
    sub->add_option("--rank", spec.run.rank,
                    "ansatz rank (0 = match target / experiment default)");
    sub->add_option("--record-every", spec.run.record_every,
                    "record cadence in iterations");
    sub->add_option("--fidelity-target", spec.fidelity_target,
                    "stop when fidelity reaches this (0 disables)");
    sub->add_flag("--early-stop", spec.run.early_stop,
                  "stop on full-data loss plateau");
    sub->add_option("--methods", methods_csv,
                    "comma list: cd,cd-tri,sm,pn,linear-inversion,imle");
    sub->add_option("--state", spec.state.type,
                    "ghz | hadamard | random | random-pure | cat");
    sub->add_option("--qubits", spec.state.n_qubits, "qubit count");
    sub->add_option("--dim", spec.state.dim, "Fock truncation (cat)");
    sub->add_option("--state-rank", spec.state.rank,
                    "target state rank (0 = full)");
    sub->add_option("--xi-abs", xi_abs, "|xi| for cat states");
    sub->add_option("--xi-phase", xi_phase, "arg(xi) for cat states");
    sub->add_option("--qubit-counts", spec.qubit_counts,
                    "bench-time qubit counts");
    sub->add_option("--state-ranks", spec.state_ranks,
                    "bench-rank state ranks");
    sub->add_option("--ansatz-ranks", spec.ansatz_ranks,
                    "bench-rank ansatz ranks");
    sub->add_option("--sizes", spec.data_sizes, "bench-data subset sizes");
    sub->add_option("--resamples", spec.resamples, "bench-data resamples");
    sub->add_option("--noise", spec.noise_kind, "depolarizing | gaussian");
    sub->add_option("--levels", spec.noise_levels,
                    "noise levels (eps or sigma^2)");
    sub->add_option("--extent", spec.extent, "husimi grid extent");
    sub->add_option("--grid-steps", spec.grid_steps, "husimi grid steps");
    sub->add_option("--imle-iters", spec.imle_iters, "imle iteration cap");
    sub->add_option("--wigner-extent", spec.wigner_extent,
                    "wigner grid extent");
    sub->add_option("--wigner-steps", spec.wigner_steps, "wigner grid steps");
    sub->add_option("--batch-sizes", spec.batch_sizes,
                    "sweep-hyper batch grid");
    sub->add_option("--eta0s", spec.step_sizes, "sweep-hyper step-size grid");
  }

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  spec.kind = kinds.at(sub->get_name());

  try {
    if (!config_path.empty()) {
      merge_config_file(config_path, *sub, spec, methods_csv);
    }
    if (sub->count("--xi-abs") > 0 || sub->count("--xi-phase") > 0) {
      spec.state.xi = std::polar(xi_abs, xi_phase);
    }
    spec.methods.clear();
    for (const auto& m : split_csv(methods_csv)) {
      spec.methods.push_back(qst::method_from_string(m));
    }

    const auto records = qst::run_experiment(spec);
    int failed = 0;
    for (const auto& r : records) {
      if (!r.error.empty()) {
        ++failed;
        std::cerr << "trial error [" << r.method << " #" << r.trial
                  << "]: " << r.error << "\n";
      }
    }
    std::cout << records.size() - failed << "/" << records.size()
              << " trials completed; results in " << spec.out_dir << "\n";
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

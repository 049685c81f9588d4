// Command-line simulator: Monte-Carlo experiment driver plus a DIMACS-driven
// hardness-gadget checker. Exit codes: 0 success, 2 config error, 3 solver or
// reduction failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hetnet/experiment.hpp"
#include "hetnet/sat_gadget.hpp"

namespace {

int run_np_check(const std::string& path) {
  const hetnet::ThreeSatInstance sat = hetnet::parse_dimacs_file(path);
  const hetnet::ReductionReport rep = hetnet::check_reduction(sat);

  std::printf("np-check: %s is %s; network max sum rate %.6f bits vs threshold %.0f bits; reduction %s\n",
              path.c_str(), rep.sat_decision ? "satisfiable" : "unsatisfiable",
              rep.max_rate_bits, rep.threshold_bits,
              rep.rate_matches ? "agrees" : "DISAGREES");
  if (rep.sat_decision) {
    std::string bits;
    for (int v : rep.assignment) bits += v ? '1' : '0';
    std::printf("np-check: satisfying assignment (x1..xN) = %s\n", bits.c_str());
  }
  return rep.rate_matches ? 0 : 3;
}

int run_simulation(const std::string& config_path, const std::string& mode,
                   int trials, bool seed_given, std::uint64_t seed,
                   const std::vector<double>& snr_list, const std::string& out_dir) {
  hetnet::ScenarioConfig cfg = hetnet::parse_config_file(config_path);
  if (seed_given) cfg.seed = seed;

  hetnet::ExperimentOptions opts;
  opts.run_joint = mode == "joint" || mode == "both";
  opts.run_fixed = mode == "fixed" || mode == "both";
  opts.trials = trials;
  opts.out_dir = out_dir;
  if (!snr_list.empty()) opts.snr_list = snr_list;

  const hetnet::ExperimentResults results = hetnet::run_experiment(cfg, opts);
  hetnet::emit_outputs(results);

  int failed = 0;
  int unconverged = 0;
  for (const auto& r : results.runs) {
    if (r.failed) {
      ++failed;
      std::fprintf(stderr, "trial snr=%g #%d mode=%s failed: %s\n", r.snr_db,
                   r.trial, r.mode == hetnet::GameMode::joint ? "joint" : "fixed",
                   r.error.c_str());
    } else if (!r.trace.converged) {
      ++unconverged;
    }
  }
  std::printf("wrote %zu runs (%d failed, %d hit the sweep cap) to %s\n",
              results.runs.size(), failed, unconverged, out_dir.c_str());
  return failed == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uplink MIMO HetNet best-response game simulator"};

  std::string config_path;
  std::string mode = "both";
  int trials = 5;
  std::uint64_t seed = 0;
  std::vector<double> snr_list;
  std::string out_dir = "out";
  std::string np_check_path;

  app.add_option("--config", config_path, "key=value scenario config file");
  app.add_option("--mode", mode, "association mode: joint, fixed, or both")
      ->check(CLI::IsMember({"joint", "fixed", "both"}));
  app.add_option("--trials", trials, "Monte-Carlo trials per SNR point")
      ->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_option("--snr-list", snr_list, "SNR points in dB (comma separated)")
      ->delimiter(',');
  app.add_option("--out", out_dir, "output directory for CSV files");
  app.add_option("--np-check", np_check_path,
                 "DIMACS 3-SAT file: build the gadget network and verify the "
                 "rate threshold matches satisfiability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!np_check_path.empty()) {
      return run_np_check(np_check_path);
    }
    if (config_path.empty()) {
      std::fprintf(stderr, "error: --config is required unless --np-check is used\n");
      return 2;
    }
    return run_simulation(config_path, mode, trials, seed_opt->count() > 0, seed,
                          snr_list, out_dir);
  } catch (const hetnet::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const hetnet::InvalidPlacement& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const hetnet::HetnetError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

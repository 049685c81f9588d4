#pragma once
// Monte-Carlo experiment driver: for each SNR point and trial, generate one
// topology and channel set, run the joint and/or fixed-association game on
// those identical channels, and emit plot-ready CSV files.

#include <string>
#include <vector>

#include "hetnet/game.hpp"

namespace hetnet {

struct ExperimentOptions {
  std::vector<double> snr_list = {0.0, 10.0, 20.0, 30.0};
  int trials = 5;
  bool run_joint = true;
  bool run_fixed = true;
  std::string out_dir = "out";
  ExecPolicy trial_policy = ExecPolicy::openmp;  // trials are independent
};

struct TrialRun {
  double snr_db = 0.0;
  int trial = 0;
  GameMode mode = GameMode::joint;
  std::uint64_t channel_hash = 0;
  GameTrace trace;
  std::vector<double> rate_bits;  // final per-user rates
  std::vector<int> initial_assoc;
  std::vector<int> final_assoc;
  double sum_utility = 0.0;  // final f, nats-based utilities
  bool failed = false;
  std::string error;
};

struct ExperimentResults {
  ScenarioConfig cfg;
  ExperimentOptions opts;
  std::vector<TrialRun> runs;  // ordered by (snr index, trial, joint<fixed)

  bool any_failed() const;
};

// Each (snr, trial) pair gets its own child seed derived from cfg.seed, so
// results do not depend on scheduling and reruns are byte-identical.
ExperimentResults run_experiment(const ScenarioConfig& cfg,
                                 const ExperimentOptions& opts);

// Writes run.csv (per-update traces), rates.csv, assoc.csv (initial and
// final association per user), cdf.csv (per snr/mode empirical CDF ending at
// 1.0), summary.csv (per snr/mode means), and trials.csv (per-run log with
// the channel hash). Throws IoFailure.
void emit_outputs(const ExperimentResults& results);

}  // namespace hetnet

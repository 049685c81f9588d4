#include "hetnet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

namespace hetnet {
namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string mode_name(GameMode m) {
  return m == GameMode::joint ? "joint" : "fixed";
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::ofstream open_csv(const std::filesystem::path& dir, const std::string& name) {
  const std::filesystem::path p = dir / name;
  std::ofstream f(p);
  if (!f) throw IoFailure("cannot open '" + p.string() + "' for writing");
  return f;
}

void run_one_pair(const ScenarioConfig& cfg, const ExperimentOptions& opts,
                  std::size_t si, int trial, const std::vector<GameMode>& modes,
                  TrialRun* slots) {
  ScenarioConfig cfg_trial = cfg;
  cfg_trial.snr_db = opts.snr_list[si];
  cfg_trial.power_budget = 0.0;  // re-derive the budget from this SNR point
  cfg_trial.seed = mix_seed(cfg.seed, si * 1000003ULL + static_cast<std::uint64_t>(trial));

  Rng topo_rng(cfg_trial.seed, Substream::topology);
  const Topology top = generate_topology(cfg_trial, topo_rng);
  Rng ch_rng(cfg_trial.seed, Substream::channels);
  const ChannelSet ch = generate_channels(top, cfg_trial, ch_rng);
  const std::uint64_t hash = channel_hash(ch);

  Rng init_rng(cfg_trial.seed, Substream::init);
  const std::vector<int> initial_assoc = init_state(cfg_trial, ch, init_rng).assoc;

  for (std::size_t j = 0; j < modes.size(); ++j) {
    TrialRun& out = slots[j];
    out.snr_db = cfg_trial.snr_db;
    out.trial = trial;
    out.mode = modes[j];
    out.channel_hash = hash;
    out.initial_assoc = initial_assoc;

    ScenarioConfig cfg_run = cfg_trial;
    cfg_run.mode = modes[j];
    const auto record_state = [&](const NetworkState& st) {
      out.final_assoc = st.assoc;
      out.rate_bits.resize(cfg_run.num_users);
      for (int n = 0; n < cfg_run.num_users; ++n) {
        out.rate_bits[n] = user_rate(st, ch, cfg_run, n) / kLn2;
      }
      out.sum_utility =
          sum_utility(st, ch, cfg_run, cfg_run.utility_specs()).sum_utility;
    };
    try {
      RunResult rr = run_game(cfg_run, ch);
      out.trace = std::move(rr.trace);
      record_state(rr.state);
    } catch (const MaxSweepsExceeded& e) {
      // A sweep-cap run is still a complete measurement of the dynamics; it
      // is reported from its last state with trace.converged left false.
      out.trace = e.trace;
      try {
        record_state(e.state);
      } catch (const std::exception& inner) {
        out.failed = true;
        out.error = inner.what();
      }
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
    }
  }
}

}  // namespace

bool ExperimentResults::any_failed() const {
  return std::any_of(runs.begin(), runs.end(),
                     [](const TrialRun& r) { return r.failed; });
}

ExperimentResults run_experiment(const ScenarioConfig& cfg,
                                 const ExperimentOptions& opts) {
  cfg.validate();
  if (opts.trials < 1) throw ConfigError("trials must be >= 1");
  if (opts.snr_list.empty()) throw ConfigError("snr_list must not be empty");
  if (!opts.run_joint && !opts.run_fixed) {
    throw ConfigError("at least one of joint/fixed must run");
  }

  std::vector<GameMode> modes;
  if (opts.run_joint) modes.push_back(GameMode::joint);
  if (opts.run_fixed) modes.push_back(GameMode::fixed);

  ExperimentResults res;
  res.cfg = cfg;
  res.opts = opts;
  const std::size_t pairs = opts.snr_list.size() * static_cast<std::size_t>(opts.trials);
  res.runs.resize(pairs * modes.size());

  // Pairs write disjoint, preassigned slots, so scheduling cannot reorder or
  // alter the output.
  if (opts.trial_policy == ExecPolicy::openmp) {
    const long long pair_count = static_cast<long long>(pairs);
#pragma omp parallel for schedule(dynamic)
    for (long long pi = 0; pi < pair_count; ++pi) {
      const std::size_t si = static_cast<std::size_t>(pi) / opts.trials;
      const int trial = static_cast<int>(pi % opts.trials);
      run_one_pair(cfg, opts, si, trial, modes,
                   &res.runs[static_cast<std::size_t>(pi) * modes.size()]);
    }
  } else {
    for (std::size_t pi = 0; pi < pairs; ++pi) {
      const std::size_t si = pi / opts.trials;
      const int trial = static_cast<int>(pi % opts.trials);
      run_one_pair(cfg, opts, si, trial, modes, &res.runs[pi * modes.size()]);
    }
  }
  return res;
}

void emit_outputs(const ExperimentResults& results) {
  const std::filesystem::path dir(results.opts.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoFailure("cannot create output directory '" + dir.string() +
                    "': " + ec.message());
  }

  {
    std::ofstream f = open_csv(dir, "run.csv");
    f << "snr_db,trial,mode,iter,user,sum_utility_nats,sum_utility_bits_equiv,"
         "switches,max_gap\n";
    for (const TrialRun& r : results.runs) {
      for (const TraceRecord& rec : r.trace.records) {
        f << fmt(r.snr_db) << ',' << r.trial << ',' << mode_name(r.mode) << ','
          << rec.iter << ',' << rec.user << ',' << fmt(rec.sum_utility) << ','
          << fmt(rec.sum_utility / kLn2) << ',' << rec.switches << ','
          << fmt(rec.gap) << '\n';
      }
    }
  }

  {
    std::ofstream f = open_csv(dir, "rates.csv");
    f << "snr_db,trial,mode,user,rate_bits\n";
    for (const TrialRun& r : results.runs) {
      for (std::size_t n = 0; n < r.rate_bits.size(); ++n) {
        f << fmt(r.snr_db) << ',' << r.trial << ',' << mode_name(r.mode) << ','
          << n << ',' << fmt(r.rate_bits[n]) << '\n';
      }
    }
  }

  {
    std::ofstream f = open_csv(dir, "assoc.csv");
    f << "snr_db,trial,mode,user,initial_bs,final_bs\n";
    for (const TrialRun& r : results.runs) {
      for (std::size_t n = 0; n < r.final_assoc.size(); ++n) {
        f << fmt(r.snr_db) << ',' << r.trial << ',' << mode_name(r.mode) << ','
          << n << ',' << r.initial_assoc[n] << ',' << r.final_assoc[n] << '\n';
      }
    }
  }

  {
    std::ofstream f = open_csv(dir, "cdf.csv");
    f << "snr_db,mode,rate_bits,cdf\n";
    std::map<std::pair<double, int>, std::vector<double>> pooled;
    for (const TrialRun& r : results.runs) {
      if (r.failed) continue;
      auto& v = pooled[{r.snr_db, static_cast<int>(r.mode)}];
      v.insert(v.end(), r.rate_bits.begin(), r.rate_bits.end());
    }
    for (auto& [key, v] : pooled) {
      std::sort(v.begin(), v.end());
      for (std::size_t i = 0; i < v.size(); ++i) {
        f << fmt(key.first) << ',' << mode_name(static_cast<GameMode>(key.second))
          << ',' << fmt(v[i]) << ','
          << fmt(static_cast<double>(i + 1) / static_cast<double>(v.size()))
          << '\n';
      }
    }
  }

  {
    std::ofstream f = open_csv(dir, "summary.csv");
    f << "snr_db,mode,trials_ok,mean_rate_bits,mean_sum_utility_nats,"
         "mean_sweeps,mean_switches\n";
    struct Acc {
      double rate_sum = 0.0;
      long long rate_n = 0;
      double util_sum = 0.0;
      double sweeps_sum = 0.0;
      double switches_sum = 0.0;
      long long ok = 0;
    };
    std::map<std::pair<double, int>, Acc> acc;
    for (const TrialRun& r : results.runs) {
      if (r.failed) continue;
      Acc& a = acc[{r.snr_db, static_cast<int>(r.mode)}];
      for (double x : r.rate_bits) {
        a.rate_sum += x;
        ++a.rate_n;
      }
      a.util_sum += r.sum_utility;
      a.sweeps_sum += r.trace.sweeps;
      a.switches_sum += r.trace.records.empty() ? 0 : r.trace.records.back().switches;
      ++a.ok;
    }
    for (const auto& [key, a] : acc) {
      f << fmt(key.first) << ','
        << mode_name(static_cast<GameMode>(key.second)) << ',' << a.ok << ','
        << fmt(a.rate_n > 0 ? a.rate_sum / a.rate_n : 0.0) << ','
        << fmt(a.ok > 0 ? a.util_sum / a.ok : 0.0) << ','
        << fmt(a.ok > 0 ? a.sweeps_sum / a.ok : 0.0) << ','
        << fmt(a.ok > 0 ? a.switches_sum / a.ok : 0.0) << '\n';
    }
  }

  {
    std::ofstream f = open_csv(dir, "trials.csv");
    f << "snr_db,trial,mode,channel_hash,sweeps,switches,sum_utility_nats,"
         "converged,failed,error\n";
    for (const TrialRun& r : results.runs) {
      char hash_hex[20];
      std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                    static_cast<unsigned long long>(r.channel_hash));
      f << fmt(r.snr_db) << ',' << r.trial << ',' << mode_name(r.mode) << ','
        << hash_hex << ',' << r.trace.sweeps << ','
        << (r.trace.records.empty() ? 0 : r.trace.records.back().switches) << ','
        << fmt(r.sum_utility) << ',' << (r.trace.converged ? 1 : 0) << ','
        << (r.failed ? 1 : 0) << ',' << sanitize(r.error) << '\n';
    }
  }
}

}  // namespace hetnet

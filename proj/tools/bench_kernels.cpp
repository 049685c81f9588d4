// Timings for the OpenMP-parallel kernels against their serial reference
// implementations, with an exact-match check (the two policies must produce
// bit-identical results). Set OMP_NUM_THREADS to control the thread count.

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>

#include "hetnet/experiment.hpp"
#include "hetnet/pricing.hpp"
#include "hetnet/sat_gadget.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool report(const char* name, double serial_ms, double omp_ms, bool match) {
  std::printf("%-24s %10.1f ms %10.1f ms %8.2fx   %s\n", name, serial_ms, omp_ms,
              omp_ms > 0.0 ? serial_ms / omp_ms : 0.0,
              match ? "identical" : "MISMATCH");
  return match;
}

bool bench_sat_brute_force() {
  // x1..x3 over three clauses; three power levels put the space around 1.5e7
  // configurations, a few seconds of enumeration per policy.
  const std::string dimacs = "p cnf 3 3\n1 2 3 0\n-1 -2 3 0\n1 -2 -3 0\n";
  std::istringstream in(dimacs);
  const hetnet::ThreeSatInstance sat = hetnet::parse_dimacs(in);
  const hetnet::GadgetNetwork net = hetnet::build_network(sat);

  const auto t0 = Clock::now();
  const auto serial =
      hetnet::brute_force_max_sum_rate(net, hetnet::ExecPolicy::serial, 3);
  const double serial_ms = ms_since(t0);

  const auto t1 = Clock::now();
  const auto omp =
      hetnet::brute_force_max_sum_rate(net, hetnet::ExecPolicy::openmp, 3);
  const double omp_ms = ms_since(t1);

  const bool match = serial.max_rate_bits == omp.max_rate_bits &&
                     serial.power_level == omp.power_level &&
                     serial.assoc == omp.assoc;
  return report("sat_brute_force", serial_ms, omp_ms, match);
}

bool bench_all_prices() {
  hetnet::ScenarioConfig cfg;
  cfg.num_users = 24;
  cfg.num_bs = 8;
  cfg.tx_antennas = 2;
  cfg.rx_antennas = {4};
  cfg.snr_db = 10.0;
  cfg.seed = 11;
  cfg.validate();

  hetnet::Rng topo_rng(cfg.seed, hetnet::Substream::topology);
  const hetnet::Topology top = hetnet::generate_topology(cfg, topo_rng);
  hetnet::Rng ch_rng(cfg.seed, hetnet::Substream::channels);
  const hetnet::ChannelSet ch = hetnet::generate_channels(top, cfg, ch_rng);
  hetnet::Rng init_rng(cfg.seed, hetnet::Substream::init);
  const hetnet::NetworkState st = hetnet::init_state(cfg, ch, init_rng);
  const auto specs = cfg.utility_specs();

  constexpr int kReps = 50;
  const auto t0 = Clock::now();
  hetnet::PriceMap serial;
  for (int r = 0; r < kReps; ++r) {
    serial = hetnet::all_prices(st, ch, cfg, specs, hetnet::ExecPolicy::serial);
  }
  const double serial_ms = ms_since(t0);

  const auto t1 = Clock::now();
  hetnet::PriceMap omp;
  for (int r = 0; r < kReps; ++r) {
    omp = hetnet::all_prices(st, ch, cfg, specs, hetnet::ExecPolicy::openmp);
  }
  const double omp_ms = ms_since(t1);

  bool match = true;
  for (int q = 0; q < cfg.num_bs && match; ++q) {
    for (int n = 0; n < cfg.num_users && match; ++n) {
      match = arma::approx_equal(serial.of(q, n), omp.of(q, n), "absdiff", 0.0);
    }
  }
  return report("all_prices", serial_ms, omp_ms, match);
}

bool bench_trials() {
  hetnet::ScenarioConfig cfg;
  cfg.num_users = 4;
  cfg.num_bs = 3;
  cfg.tx_antennas = 2;
  cfg.rx_antennas = {4};
  cfg.seed = 5;
  cfg.validate();

  hetnet::ExperimentOptions opts;
  opts.snr_list = {10.0};
  opts.trials = 4;
  opts.out_dir = "";

  opts.trial_policy = hetnet::ExecPolicy::serial;
  const auto t0 = Clock::now();
  const auto serial = hetnet::run_experiment(cfg, opts);
  const double serial_ms = ms_since(t0);

  opts.trial_policy = hetnet::ExecPolicy::openmp;
  const auto t1 = Clock::now();
  const auto omp = hetnet::run_experiment(cfg, opts);
  const double omp_ms = ms_since(t1);

  bool match = serial.runs.size() == omp.runs.size();
  for (std::size_t i = 0; i < serial.runs.size() && match; ++i) {
    match = serial.runs[i].sum_utility == omp.runs[i].sum_utility &&
            serial.runs[i].rate_bits == omp.runs[i].rate_bits &&
            serial.runs[i].final_assoc == omp.runs[i].final_assoc &&
            serial.runs[i].channel_hash == omp.runs[i].channel_hash;
  }
  return report("experiment_trials", serial_ms, omp_ms, match);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP: not enabled in this build\n");
#endif
  std::printf("%-24s %13s %13s %9s   %s\n", "kernel", "serial", "openmp",
              "speedup", "result check");
  bool ok = bench_sat_brute_force();
  ok = bench_all_prices() && ok;
  ok = bench_trials() && ok;
  return ok ? 0 : 1;
}

#pragma once
// Scenario configuration, the 7-cell pico layout, channel generation with
// pathloss and log-normal shadowing, and candidate-BS ranking.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <armadillo>

#include "hetnet/rng.hpp"
#include "hetnet/utility.hpp"

namespace hetnet {

enum class UserPlacement { cell_edge_congested, uniform, explicit_positions };
enum class UserOrder { round_robin, random };
enum class InitMode { strongest, random };
enum class GameMode { joint, fixed };

struct Tolerances {
  double bisection_eps = 1e-8;    // c* and power-multiplier bisections
  double convergence_eps = 1e-6;  // sweep improvement threshold
  int max_sweeps = 500;
};

struct ScenarioConfig {
  int num_users = 4;
  int num_bs = 2;
  int tx_antennas = 2;           // T_n, same for every user
  std::vector<int> rx_antennas;  // R_q per BS; one entry broadcasts to all
  double power_budget = 0.0;     // watts; 0 means derive from snr_db
  double noise_power = 1.0;      // sigma^2_q, same for every BS
  std::vector<double> weights;   // w_n; empty or one entry broadcasts 1.0/w
  UtilityKind utility_kind = UtilityKind::wsr;
  int candidate_bs_limit = 0;  // 0 = unrestricted
  double bs_spacing = 200.0;   // meters
  UserPlacement user_placement = UserPlacement::uniform;
  double snr_db = 10.0;
  std::uint64_t seed = 1;
  Tolerances tol;
  GameMode mode = GameMode::joint;
  UserOrder user_order = UserOrder::round_robin;
  InitMode init_mode = InitMode::strongest;
  std::vector<std::pair<double, double>> user_positions;  // explicit placement

  // power_budget if set, otherwise 10^(snr_db/10) (noise power is 1 in the
  // reference scenarios, so SNR in dB fixes the budget directly).
  double budget() const;
  int rx_at(int q) const;
  double weight_of(int n) const;
  std::vector<UtilitySpec> utility_specs() const;
  void validate() const;  // throws ConfigError
};

// Flat key=value text, one pair per line, '#' starts a comment line.
// Unknown or duplicate keys are errors.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

struct Topology {
  arma::mat bs_xy;    // Q x 2, meters
  arma::mat user_xy;  // N x 2, meters
  arma::mat dist;     // Q x N, strictly positive
};

// BS 0 sits at the origin, the other BSs on a ring of radius bs_spacing; for
// Q = 7 that is the hexagon whose adjacent vertices are exactly bs_spacing
// apart. User placement per cfg.user_placement.
Topology generate_topology(const ScenarioConfig& cfg, Rng& rng);

struct ChannelSet {
  int num_bs = 0;
  int num_users = 0;
  std::vector<arma::cx_mat> h;  // indexed q * num_users + n, each R_q x T_n

  const arma::cx_mat& of(int q, int n) const { return h[q * num_users + n]; }
  arma::cx_mat& of(int q, int n) { return h[q * num_users + n]; }
};

// Entry standard deviation sigma_{q,n} = (200 / d)^3.5 * L with the shadowing
// term L drawn as 10 log10(L) ~ N(0, 8); entries i.i.d. CN(0, sigma^2).
ChannelSet generate_channels(const Topology& top, const ScenarioConfig& cfg, Rng& rng);

double pathloss_std(double distance_m, double shadow_linear);

// BSs ordered by descending spectral norm of H_{q,n}, ties to the lower BS
// index, truncated to limit (0 keeps all Q).
std::vector<int> candidate_bs(const Topology& top, const ChannelSet& ch, int n, int limit);
std::vector<int> candidate_bs_from_channels(const ChannelSet& ch, int n, int limit);

// FNV-1a over the raw entries in (q, n) order; logged per trial so paired
// runs can prove they consumed identical channels.
std::uint64_t channel_hash(const ChannelSet& ch);

}  // namespace hetnet

#include "hetnet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace hetnet {
namespace {

// Log-normal shadowing: 10*log10(L) drawn from N(0, 8), so the dB-domain
// standard deviation is sqrt(8).
constexpr double kShadowVarDb = 8.0;
constexpr double kRefDistance = 200.0;  // meters, pathloss reference
constexpr double kPathlossExp = 3.5;
constexpr double kEdgeLo = 90.0, kEdgeHi = 100.0;      // cell-edge band
constexpr double kUniformLo = 20.0, kUniformHi = 100.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad number '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad integer '" + v + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

double ScenarioConfig::budget() const {
  if (power_budget > 0.0) return power_budget;
  return std::pow(10.0, snr_db / 10.0);
}

int ScenarioConfig::rx_at(int q) const {
  if (rx_antennas.empty()) return 4;
  if (rx_antennas.size() == 1) return rx_antennas[0];
  return rx_antennas[static_cast<std::size_t>(q)];
}

double ScenarioConfig::weight_of(int n) const {
  if (weights.empty()) return 1.0;
  if (weights.size() == 1) return weights[0];
  return weights[static_cast<std::size_t>(n)];
}

std::vector<UtilitySpec> ScenarioConfig::utility_specs() const {
  std::vector<UtilitySpec> specs(num_users);
  for (int n = 0; n < num_users; ++n) {
    specs[n].kind = utility_kind;
    specs[n].weight = weight_of(n);
  }
  return specs;
}

void ScenarioConfig::validate() const {
  if (num_users < 1) throw ConfigError("num_users must be >= 1");
  if (num_bs < 1) throw ConfigError("num_bs must be >= 1");
  if (tx_antennas < 1) throw ConfigError("tx_antennas must be >= 1");
  if (!rx_antennas.empty() && rx_antennas.size() != 1 &&
      rx_antennas.size() != static_cast<std::size_t>(num_bs)) {
    throw ConfigError("rx_antennas needs 1 or num_bs entries");
  }
  for (int q = 0; q < num_bs; ++q) {
    if (rx_at(q) < tx_antennas) {
      throw ConfigError("rx_antennas must be >= tx_antennas (tall channels)");
    }
  }
  if (budget() <= 0.0) throw ConfigError("power_budget must be positive");
  if (noise_power <= 0.0) throw ConfigError("noise_power must be positive");
  if (!weights.empty() && weights.size() != 1 &&
      weights.size() != static_cast<std::size_t>(num_users)) {
    throw ConfigError("weights needs 1 or num_users entries");
  }
  for (double w : weights) {
    if (w < 0.0) throw ConfigError("weights must be nonnegative");
  }
  if (candidate_bs_limit < 0 || candidate_bs_limit > num_bs) {
    throw ConfigError("candidate_bs_limit must lie in [0, num_bs]");
  }
  if (bs_spacing <= 0.0) throw ConfigError("bs_spacing must be positive");
  if (tol.bisection_eps <= 0.0 || tol.convergence_eps <= 0.0) {
    throw ConfigError("tolerances must be positive");
  }
  if (tol.max_sweeps < 1) throw ConfigError("max_sweeps must be >= 1");
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key=value, got '" + t + "'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty() || val.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key or value");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("duplicate config key '" + key + "'");
    }

    if (key == "num_users") {
      cfg.num_users = static_cast<int>(parse_int(key, val));
    } else if (key == "num_bs") {
      cfg.num_bs = static_cast<int>(parse_int(key, val));
    } else if (key == "tx_antennas") {
      cfg.tx_antennas = static_cast<int>(parse_int(key, val));
    } else if (key == "rx_antennas") {
      cfg.rx_antennas.clear();
      for (const auto& item : split(val, ','))
        cfg.rx_antennas.push_back(static_cast<int>(parse_int(key, item)));
    } else if (key == "power_budget") {
      cfg.power_budget = parse_double(key, val);
    } else if (key == "noise_power") {
      cfg.noise_power = parse_double(key, val);
    } else if (key == "weights") {
      cfg.weights.clear();
      for (const auto& item : split(val, ','))
        cfg.weights.push_back(parse_double(key, item));
    } else if (key == "utility_kind") {
      cfg.utility_kind = parse_utility_kind(val);
    } else if (key == "candidate_bs_limit") {
      cfg.candidate_bs_limit = static_cast<int>(parse_int(key, val));
    } else if (key == "bs_spacing") {
      cfg.bs_spacing = parse_double(key, val);
    } else if (key == "user_placement") {
      if (val == "cell_edge_congested") {
        cfg.user_placement = UserPlacement::cell_edge_congested;
      } else if (val == "uniform") {
        cfg.user_placement = UserPlacement::uniform;
      } else if (val == "explicit") {
        cfg.user_placement = UserPlacement::explicit_positions;
      } else {
        throw ConfigError("unknown user_placement '" + val + "'");
      }
    } else if (key == "snr_db") {
      cfg.snr_db = parse_double(key, val);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(key, val));
    } else if (key == "bisection_eps") {
      cfg.tol.bisection_eps = parse_double(key, val);
    } else if (key == "convergence_eps") {
      cfg.tol.convergence_eps = parse_double(key, val);
    } else if (key == "max_sweeps") {
      cfg.tol.max_sweeps = static_cast<int>(parse_int(key, val));
    } else if (key == "mode") {
      if (val == "joint") {
        cfg.mode = GameMode::joint;
      } else if (val == "fixed") {
        cfg.mode = GameMode::fixed;
      } else {
        throw ConfigError("unknown mode '" + val + "'");
      }
    } else if (key == "user_order") {
      if (val == "round_robin") {
        cfg.user_order = UserOrder::round_robin;
      } else if (val == "random") {
        cfg.user_order = UserOrder::random;
      } else {
        throw ConfigError("unknown user_order '" + val + "'");
      }
    } else if (key == "init_mode") {
      if (val == "strongest") {
        cfg.init_mode = InitMode::strongest;
      } else if (val == "random") {
        cfg.init_mode = InitMode::random;
      } else {
        throw ConfigError("unknown init_mode '" + val + "'");
      }
    } else if (key == "user_positions") {
      cfg.user_positions.clear();
      for (const auto& pair : split(val, ';')) {
        const auto xy = split(pair, ',');
        if (xy.size() != 2) {
          throw ConfigError("user_positions: expected x,y pairs separated by ';'");
        }
        cfg.user_positions.emplace_back(parse_double(key, xy[0]),
                                        parse_double(key, xy[1]));
      }
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

Topology generate_topology(const ScenarioConfig& cfg, Rng& rng) {
  const int q_count = cfg.num_bs;
  const int n_count = cfg.num_users;

  Topology top;
  top.bs_xy.set_size(q_count, 2);
  top.bs_xy.row(0) = arma::rowvec{0.0, 0.0};
  for (int q = 1; q < q_count; ++q) {
    // Ring of radius bs_spacing; with 6 ring BSs the adjacent vertices of the
    // hexagon are exactly bs_spacing apart as well.
    const double ang = 2.0 * M_PI * (q - 1) / std::max(1, q_count - 1);
    top.bs_xy(q, 0) = cfg.bs_spacing * std::cos(ang);
    top.bs_xy(q, 1) = cfg.bs_spacing * std::sin(ang);
  }

  top.user_xy.set_size(n_count, 2);
  switch (cfg.user_placement) {
    case UserPlacement::explicit_positions: {
      if (cfg.user_positions.size() != static_cast<std::size_t>(n_count)) {
        throw InvalidPlacement("explicit placement needs num_users positions, got " +
                               std::to_string(cfg.user_positions.size()));
      }
      for (int n = 0; n < n_count; ++n) {
        top.user_xy(n, 0) = cfg.user_positions[n].first;
        top.user_xy(n, 1) = cfg.user_positions[n].second;
      }
      break;
    }
    case UserPlacement::cell_edge_congested:
    case UserPlacement::uniform: {
      const bool edge = cfg.user_placement == UserPlacement::cell_edge_congested;
      const double lo = edge ? kEdgeLo : kUniformLo;
      const double hi = edge ? kEdgeHi : kUniformHi;
      const int half = (n_count + 1) / 2;  // congested-cell share
      for (int n = 0; n < n_count; ++n) {
        int home = 0;
        if (n >= half && q_count > 1) home = 1 + rng.uniform_index(q_count - 1);
        const double r = rng.uniform(lo, hi);
        const double ang = rng.uniform(0.0, 2.0 * M_PI);
        top.user_xy(n, 0) = top.bs_xy(home, 0) + r * std::cos(ang);
        top.user_xy(n, 1) = top.bs_xy(home, 1) + r * std::sin(ang);
      }
      break;
    }
  }

  top.dist.set_size(q_count, n_count);
  for (int q = 0; q < q_count; ++q) {
    for (int n = 0; n < n_count; ++n) {
      const double dx = top.bs_xy(q, 0) - top.user_xy(n, 0);
      const double dy = top.bs_xy(q, 1) - top.user_xy(n, 1);
      const double d = std::hypot(dx, dy);
      if (d <= 0.0) {
        throw InvalidPlacement("user " + std::to_string(n) +
                               " coincides with BS " + std::to_string(q));
      }
      top.dist(q, n) = d;
    }
  }
  return top;
}

double pathloss_std(double distance_m, double shadow_linear) {
  return std::pow(kRefDistance / distance_m, kPathlossExp) * shadow_linear;
}

ChannelSet generate_channels(const Topology& top, const ScenarioConfig& cfg, Rng& rng) {
  ChannelSet ch;
  ch.num_bs = cfg.num_bs;
  ch.num_users = cfg.num_users;
  ch.h.resize(static_cast<std::size_t>(ch.num_bs) * ch.num_users);
  for (int q = 0; q < ch.num_bs; ++q) {
    for (int n = 0; n < ch.num_users; ++n) {
      const double shadow_db = std::sqrt(kShadowVarDb) * rng.normal();
      const double shadow = std::pow(10.0, shadow_db / 10.0);
      const double sigma = pathloss_std(top.dist(q, n), shadow);
      arma::cx_mat h(cfg.rx_at(q), cfg.tx_antennas);
      for (arma::uword i = 0; i < h.n_rows; ++i) {
        for (arma::uword j = 0; j < h.n_cols; ++j) {
          h(i, j) = rng.cnormal(sigma);
        }
      }
      ch.of(q, n) = std::move(h);
    }
  }
  return ch;
}

std::vector<int> candidate_bs_from_channels(const ChannelSet& ch, int n, int limit) {
  std::vector<int> order(ch.num_bs);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> norm2(ch.num_bs);
  for (int q = 0; q < ch.num_bs; ++q) norm2[q] = arma::norm(ch.of(q, n), 2);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (norm2[a] != norm2[b]) return norm2[a] > norm2[b];
    return a < b;
  });
  if (limit > 0 && limit < ch.num_bs) order.resize(limit);
  return order;
}

std::vector<int> candidate_bs(const Topology& top, const ChannelSet& ch, int n, int limit) {
  (void)top;  // ranking is purely channel based
  return candidate_bs_from_channels(ch, n, limit);
}

std::uint64_t channel_hash(const ChannelSet& ch) {
  std::uint64_t h = 14695981039346656037ULL;  // FNV-1a offset basis
  auto feed = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& m : ch.h) {
    feed(m.memptr(), m.n_elem * sizeof(arma::cx_double));
  }
  return h;
}

}  // namespace hetnet

#include "hetnet/sat_gadget.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hetnet {
namespace {

constexpr double kStrongGain = 7.0;  // log2(1 + 7) = 3 bits, the per-entity quota
constexpr double kWeakGain = 1.0;
constexpr long long kMaxConfigs = 1LL << 40;

struct UserOption {
  double power = 0.0;
  int bs = -1;  // -1 = silent
};

double config_sum_rate(const GadgetNetwork& net,
                       const std::vector<std::vector<UserOption>>& options,
                       const std::vector<int>& pick, std::vector<double>& bs_power) {
  bs_power.assign(net.num_bs, 0.0);
  for (int u = 0; u < net.num_users; ++u) {
    const UserOption& o = options[u][pick[u]];
    if (o.power <= 0.0) continue;
    for (int b = 0; b < net.num_bs; ++b) {
      if (net.gain(b, u) > 0.0) bs_power[b] += net.gain(b, u) * o.power;
    }
  }
  double sum = 0.0;
  for (int u = 0; u < net.num_users; ++u) {
    const UserOption& o = options[u][pick[u]];
    if (o.power <= 0.0) continue;
    const double s = net.gain(o.bs, u) * o.power;
    sum += std::log2(1.0 + s / (1.0 + bs_power[o.bs] - s));
  }
  return sum;
}

void decode(const std::vector<std::vector<UserOption>>& options, long long idx,
            std::vector<int>& pick) {
  for (std::size_t u = 0; u < options.size(); ++u) {
    const long long radix = static_cast<long long>(options[u].size());
    pick[u] = static_cast<int>(idx % radix);
    idx /= radix;
  }
}

}  // namespace

void ThreeSatInstance::validate() const {
  if (num_vars < 1) throw ConfigError("formula needs at least one variable");
  for (std::size_t m = 0; m < clauses.size(); ++m) {
    for (const Literal& lit : clauses[m]) {
      if (lit.var < 0 || lit.var >= num_vars) {
        throw ConfigError("clause " + std::to_string(m) +
                          " references variable " + std::to_string(lit.var + 1) +
                          " outside 1.." + std::to_string(num_vars));
      }
    }
  }
}

ThreeSatInstance parse_dimacs(std::istream& in) {
  ThreeSatInstance sat;
  bool have_header = false;
  long long claimed_clauses = 0;
  std::vector<long long> literals;

  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank line
    if (first == "c" || first[0] == 'c') continue;
    if (first == "p") {
      if (have_header) throw ConfigError("duplicate DIMACS header");
      std::string kind;
      long long nv = 0, nc = 0;
      if (!(ls >> kind >> nv >> nc) || kind != "cnf") {
        throw ConfigError("malformed DIMACS header, expected 'p cnf <vars> <clauses>'");
      }
      sat.num_vars = static_cast<int>(nv);
      claimed_clauses = nc;
      have_header = true;
      continue;
    }
    if (!have_header) throw ConfigError("clause before DIMACS header");
    ls.clear();
    ls.seekg(0);
    long long tok = 0;
    while (ls >> tok) literals.push_back(tok);
    if (ls.fail() && !ls.eof()) {
      throw ConfigError("non-integer token in DIMACS clause line: " + line);
    }
  }
  if (!have_header) throw ConfigError("missing DIMACS header");

  std::array<Literal, 3> clause{};
  int width = 0;
  for (long long tok : literals) {
    if (tok == 0) {
      if (width != 3) {
        throw ConfigError("clause " + std::to_string(sat.clauses.size()) +
                          " has " + std::to_string(width) +
                          " literals, expected exactly 3");
      }
      sat.clauses.push_back(clause);
      width = 0;
      continue;
    }
    if (width == 3) {
      throw ConfigError("clause " + std::to_string(sat.clauses.size()) +
                        " has more than 3 literals");
    }
    const long long var = tok > 0 ? tok : -tok;
    if (var < 1 || var > sat.num_vars) {
      throw ConfigError("literal " + std::to_string(tok) +
                        " outside declared variable range");
    }
    clause[width].var = static_cast<int>(var - 1);
    clause[width].negated = tok < 0;
    ++width;
  }
  if (width != 0) throw ConfigError("unterminated final clause (missing 0)");
  if (static_cast<long long>(sat.clauses.size()) != claimed_clauses) {
    throw ConfigError("header claims " + std::to_string(claimed_clauses) +
                      " clauses, file has " + std::to_string(sat.clauses.size()));
  }
  sat.validate();
  return sat;
}

ThreeSatInstance parse_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open DIMACS file '" + path + "'");
  return parse_dimacs(in);
}

GadgetNetwork build_network(const ThreeSatInstance& sat) {
  sat.validate();
  GadgetNetwork net;
  net.num_clauses = static_cast<int>(sat.clauses.size());
  net.num_vars = sat.num_vars;
  net.num_bs = 3 * net.num_clauses + net.num_vars;
  net.num_users = net.num_clauses + 2 * net.num_vars;
  net.gain.zeros(net.num_bs, net.num_users);

  for (int m = 0; m < net.num_clauses; ++m) {
    for (int i = 0; i < 3; ++i) {
      net.gain(net.clause_bs(m, i), net.clause_user(m)) = kStrongGain;
    }
  }
  for (int v = 0; v < net.num_vars; ++v) {
    net.gain(net.var_bs(v), net.var_user(v, false)) = kStrongGain;
    net.gain(net.var_bs(v), net.var_user(v, true)) = kStrongGain;
  }
  // A clause slot for literal l hears the user of the complement of l at weak
  // gain: that user transmitting is exactly what falsifies l.
  for (int m = 0; m < net.num_clauses; ++m) {
    for (int i = 0; i < 3; ++i) {
      const Literal& lit = sat.clauses[m][i];
      const int complement_user = net.var_user(lit.var, !lit.negated);
      net.gain(net.clause_bs(m, i), complement_user) = kWeakGain;
    }
  }
  return net;
}

BruteForceResult brute_force_max_sum_rate(const GadgetNetwork& net,
                                          ExecPolicy policy, int power_levels) {
  if (power_levels < 2) throw ConfigError("power_levels must be >= 2");

  std::vector<std::vector<UserOption>> options(net.num_users);
  long long total = 1;
  for (int u = 0; u < net.num_users; ++u) {
    options[u].push_back({0.0, -1});
    for (int l = 1; l < power_levels; ++l) {
      const double p = static_cast<double>(l) / (power_levels - 1);
      for (int b = 0; b < net.num_bs; ++b) {
        if (net.gain(b, u) > 0.0) options[u].push_back({p, b});
      }
    }
    if (total > kMaxConfigs / static_cast<long long>(options[u].size())) {
      throw TooLarge("configuration space exceeds 2^40 entries");
    }
    total *= static_cast<long long>(options[u].size());
  }

  double best_rate = -1.0;
  long long best_idx = 0;

  if (policy == ExecPolicy::openmp) {
#pragma omp parallel
    {
      double loc_rate = -1.0;
      long long loc_idx = 0;
      std::vector<int> pick(net.num_users);
      std::vector<double> bs_power;
#pragma omp for schedule(static)
      for (long long k = 0; k < total; ++k) {
        decode(options, k, pick);
        const double r = config_sum_rate(net, options, pick, bs_power);
        if (r > loc_rate || (r == loc_rate && k < loc_idx)) {
          loc_rate = r;
          loc_idx = k;
        }
      }
#pragma omp critical
      {
        if (loc_rate > best_rate ||
            (loc_rate == best_rate && loc_idx < best_idx)) {
          best_rate = loc_rate;
          best_idx = loc_idx;
        }
      }
    }
  } else {
    std::vector<int> pick(net.num_users);
    std::vector<double> bs_power;
    for (long long k = 0; k < total; ++k) {
      decode(options, k, pick);
      const double r = config_sum_rate(net, options, pick, bs_power);
      if (r > best_rate) {
        best_rate = r;
        best_idx = k;
      }
    }
  }

  BruteForceResult res;
  res.max_rate_bits = best_rate;
  std::vector<int> pick(net.num_users);
  decode(options, best_idx, pick);
  res.power_level.resize(net.num_users);
  res.assoc.resize(net.num_users);
  for (int u = 0; u < net.num_users; ++u) {
    const UserOption& o = options[u][pick[u]];
    res.assoc[u] = o.bs;
    res.power_level[u] =
        o.power <= 0.0
            ? 0
            : static_cast<int>(std::lround(o.power * (power_levels - 1)));
  }
  return res;
}

ReductionReport check_reduction(const ThreeSatInstance& sat) {
  sat.validate();
  if (sat.num_vars > 25) {
    throw TooLarge("assignment space exceeds 2^25 entries");
  }

  ReductionReport rep;
  const long long assignments = 1LL << sat.num_vars;
  for (long long k = 0; k < assignments; ++k) {
    bool all = true;
    for (const auto& clause : sat.clauses) {
      bool any = false;
      for (const Literal& lit : clause) {
        const bool value = ((k >> lit.var) & 1LL) != 0;
        if (value != lit.negated) {
          any = true;
          break;
        }
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) {
      rep.sat_decision = true;
      rep.assignment.resize(sat.num_vars);
      for (int v = 0; v < sat.num_vars; ++v) {
        rep.assignment[v] = static_cast<int>((k >> v) & 1LL);
      }
      break;
    }
  }

  const GadgetNetwork net = build_network(sat);
  rep.network_optimum = brute_force_max_sum_rate(net);
  rep.max_rate_bits = rep.network_optimum.max_rate_bits;
  rep.threshold_bits = 3.0 * (net.num_clauses + net.num_vars);
  const bool reaches = rep.max_rate_bits >= rep.threshold_bits - 1e-9;
  rep.rate_matches = reaches == rep.sat_decision;
  return rep;
}

FrontierReport two_user_frontier_check() {
  auto f = [](double p) { return (1.0 + 7.0 / (1.0 + 7.0 * p)) * (1.0 + p); };
  FrontierReport rep;
  rep.f_at_zero = f(0.0);
  rep.f_at_one = f(1.0);
  rep.max_over_grid = -1.0;
  rep.min_over_grid = 1e300;
  for (int i = 1; i <= 10000; ++i) {
    const double p = i * 1e-4;
    const double v = f(p);
    if (v > rep.max_over_grid) rep.max_over_grid = v;
    if (v < rep.min_over_grid) {
      rep.min_over_grid = v;
      rep.argmin = p;
    }
  }
  return rep;
}

}  // namespace hetnet

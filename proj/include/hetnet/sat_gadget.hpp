#pragma once
// Compiles a 3-SAT instance into a single-antenna network whose maximum sum
// rate is 3(M+N) bits exactly when the formula is satisfiable, and certifies
// the equivalence by exhaustive search at desk scale. Rates here are in bits
// (the construction's arithmetic, log2(1+7) = 3, fixes the base).

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <armadillo>

#include "hetnet/errors.hpp"
#include "hetnet/exec.hpp"

namespace hetnet {

struct Literal {
  int var = 0;  // 0-based variable index
  bool negated = false;
};

struct ThreeSatInstance {
  int num_vars = 0;
  std::vector<std::array<Literal, 3>> clauses;

  void validate() const;  // ConfigError on out-of-range variables
};

// DIMACS CNF: optional 'c' comment lines, header "p cnf N M", then M clauses
// of exactly three literals each, 0-terminated. Repeated literals inside a
// clause are allowed (that is how shorter clauses are padded to width 3).
ThreeSatInstance parse_dimacs(std::istream& in);
ThreeSatInstance parse_dimacs_file(const std::string& path);

// 3M+N BSs and M+2N users, all single antenna, noise 1, budget 1, unit
// weights. BSs 3m..3m+2 belong to clause m; BS 3M+v is variable v's BS.
// User m < M is clause m's user; users M+2v and M+2v+1 are X_v and not-X_v.
struct GadgetNetwork {
  int num_clauses = 0;
  int num_vars = 0;
  int num_bs = 0;
  int num_users = 0;
  arma::mat gain;  // |h|^2, num_bs x num_users, entries in {7, 1, 0}

  int clause_bs(int m, int i) const { return 3 * m + i; }
  int var_bs(int v) const { return 3 * num_clauses + v; }
  int clause_user(int m) const { return m; }
  int var_user(int v, bool negated) const {
    return num_clauses + 2 * v + (negated ? 1 : 0);
  }
};

// Channel rules: clause user m has amplitude sqrt(7) to its three clause BSs;
// variable user X_v has sqrt(7) to its variable BS and amplitude 1 to every
// clause BS whose literal is the complement not-X_v (symmetrically for
// not-X_v); all other entries are zero.
GadgetNetwork build_network(const ThreeSatInstance& sat);

struct BruteForceResult {
  double max_rate_bits = 0.0;
  std::vector<int> power_level;  // 0..levels-1 per user (0 = silent)
  std::vector<int> assoc;        // serving BS per user, -1 when silent
};

// Exhaustive scan over per-user power in {0, budget} (or an optional finer
// grid) and association among the BSs the user actually reaches. Interference
// is treated as noise. TooLarge above 2^40 configurations. The OpenMP policy
// splits the index space into blocks and merges block maxima, preferring the
// smallest configuration index on exact ties so both policies return the
// identical result.
BruteForceResult brute_force_max_sum_rate(const GadgetNetwork& net,
                                          ExecPolicy policy = ExecPolicy::serial,
                                          int power_levels = 2);

struct ReductionReport {
  bool sat_decision = false;
  bool rate_matches = false;  // (max rate >= 3(M+N) - 1e-9) iff satisfiable
  double max_rate_bits = 0.0;
  double threshold_bits = 0.0;             // 3(M+N)
  std::vector<int> assignment;             // satisfying assignment if sat
  BruteForceResult network_optimum;
};

ReductionReport check_reduction(const ThreeSatInstance& sat);

struct FrontierReport {
  double max_over_grid = 0.0;  // over p in (0, 1], step 1e-4
  double f_at_zero = 0.0;      // 8
  double f_at_one = 0.0;       // 3.75
  double argmin = 0.0;         // near (sqrt(42) - 1) / 7
  double min_over_grid = 0.0;
};

// f(p) = (1 + 7/(1+7p)) (1+p): the two-user sum-rate exponent when a variable
// pair shares one BS. Its supremum on (0, 1] stays strictly below 8, which is
// why optima never split power across a variable pair.
FrontierReport two_user_frontier_check();

}  // namespace hetnet

#pragma once
// Gauss-Seidel best-response dynamics with BS pricing: one user updates at a
// time, every BS reprices after every update. Includes convergence detection,
// Nash-equilibrium verification, and a finite-difference KKT residual.

#include <iosfwd>

#include "hetnet/best_response.hpp"

namespace hetnet {

struct TraceRecord {
  int iter = 0;  // global update counter, starts at 1
  int user = 0;  // acting user
  double sum_utility = 0.0;  // f(S, a) after the update
  std::vector<int> assoc;    // association vector after the update
  int switches = 0;          // cumulative association switches
  double gap = 0.0;          // acting user's accepted surplus improvement
};

struct GameTrace {
  std::vector<TraceRecord> records;
  int sweeps = 0;
  bool converged = false;
};

struct MaxSweepsExceeded : HetnetError {
  MaxSweepsExceeded(const std::string& what, GameTrace partial, NetworkState last)
      : HetnetError(what), trace(std::move(partial)), state(std::move(last)) {}
  GameTrace trace;
  NetworkState state;  // state at the sweep cap, still valid for reporting
};

// Strongest-candidate association (or a random candidate with
// InitMode::random), S_n = 0.9 (budget / T) I, all prices zero.
NetworkState init_state(const ScenarioConfig& cfg, const ChannelSet& ch, Rng& rng);

struct StepResult {
  bool switched = false;
  double gap = 0.0;
};

// One user update at frozen prices followed by a full reprice. The move is
// kept only if it strictly improves the user's priced surplus, which makes
// the sum utility nondecreasing from the first repriced state on.
StepResult game_step(NetworkState& st, const ChannelSet& ch,
                     const ScenarioConfig& cfg,
                     const std::vector<UtilitySpec>& specs,
                     const std::vector<std::vector<int>>& candidates, int n);

struct RunResult {
  NetworkState state;
  GameTrace trace;
};

// Sweeps users (round-robin by default) until a full sweep sees improvement
// below convergence_eps and no association switch. Throws MaxSweepsExceeded
// (carrying the partial trace) if max_sweeps pass without convergence.
RunResult run_game(const ScenarioConfig& cfg, const ChannelSet& ch);

struct NeReport {
  double max_user_gap = 0.0;
  double max_price_residual = 0.0;
  bool is_ne = false;
};

// Re-solves every user's best response against the final state and reprices
// from scratch; both maxima must fall below tol at an equilibrium. In fixed
// mode the deviation space is the covariance only.
NeReport verify_ne(const NetworkState& st, const ChannelSet& ch,
                   const ScenarioConfig& cfg, double tol);

// Per-user first-order residual of the sum-utility problem at the fixed
// association: || S_n - P(S_n + grad_n) ||_F with the gradient taken by
// central finite differences and P the projection onto the feasible set,
// plus any budget violation. Zero exactly at a KKT point.
std::vector<double> kkt_residual(const NetworkState& st, const ChannelSet& ch,
                                 const ScenarioConfig& cfg);

// Candidate list per user, shared by init/run/verify.
std::vector<std::vector<int>> candidate_lists(const ChannelSet& ch,
                                              const ScenarioConfig& cfg);

// Columns: iter,user,sum_utility_nats,sum_utility_bits_equiv,switches,max_gap.
void write_trace_csv(const GameTrace& trace, std::ostream& out);

}  // namespace hetnet

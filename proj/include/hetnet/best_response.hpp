#pragma once
// Single-user surplus maximization: maximize f(R(S)) - tr[A S] subject to
// S PSD and tr S <= budget. Solved by a Lagrangian change of basis that
// diagonalizes the problem, a scalar bisection for the water level c*, an
// outer bisection on the power multiplier mu, and a per-candidate-BS sweep
// for the joint association step.

#include "hetnet/pricing.hpp"

namespace hetnet {

struct InnerProblem {
  arma::cx_mat direct_channel;  // H, R x T
  arma::cx_mat interference;    // C, R x R, positive definite
  arma::cx_mat total_price;     // A, T x T, PSD
  double power_budget = 1.0;
  UtilitySpec utility;
};

struct DiagonalizedProblem {
  arma::vec delta;  // singular values of B^{-1} H L^{-1}, padded to T entries
  arma::cx_mat l;   // upper triangular, A + mu I = l^H l
  arma::cx_mat m;   // right singular vectors (T x T unitary)
  // Additive rate constant in the diagonal coordinates. The rate equals
  // sum_i log(1 + s_i delta_i^2) + c3; with the factorizations used here the
  // constant is exactly zero, but it stays a field because the water-level
  // search is defined relative to it.
  double c3 = 0.0;
};

// Factor A + mu I = L^H L and C = B B^H, then SVD B^{-1} H L^{-1}. Requires
// mu > 0, or mu = 0 with A positive definite (DegenerateRegularizer
// otherwise; callers regularize with mu = 1e-12).
DiagonalizedProblem diagonalize(const InnerProblem& p, double mu);

// Water level: the fixed point of c = alpha(rate(c) + c3) where
// rate(c) = sum over active i of ln(c delta_i^2). For weighted sum rate the
// slope is constant, so c* = w with no search. NoPositiveGain if every
// delta_i is zero.
double solve_c_star(const DiagonalizedProblem& dp, const UtilitySpec& utility,
                    double c3, double eps);

struct InnerSolution {
  arma::cx_mat s;
  double trace = 0.0;
};

// Unique maximizer of f(R(S)) - tr[(A + mu I) S] over the PSD cone:
// s_i = [c* - 1/delta_i^2]^+ in the diagonal coordinates, mapped back
// through L^{-1} M.
InnerSolution solve_inner_covariance(const InnerProblem& p, double mu);

struct UserSolution {
  arma::cx_mat s;
  double mu = 0.0;
};

// Full budgeted problem: if the mu -> 0 solution already fits the budget it
// is returned with mu = 0; otherwise bisect mu using the monotone decrease of
// tr S(mu), stopping when |tr - budget| < eps or the bracket closes below
// eps. The returned S always satisfies the budget.
UserSolution solve_user_covariance(const InnerProblem& p, double eps);

// f(R(S)) - tr[A S]: the priced surplus the user maximizes.
double priced_utility(const InnerProblem& p, const arma::cx_mat& s);
// Same minus the mu-weighted power term; what solve_inner_covariance optimizes.
double lagrangian_value(const InnerProblem& p, const arma::cx_mat& s, double mu);

struct BsChoice {
  arma::cx_mat s;
  int bs = 0;
  double value = 0.0;  // priced surplus at (s, bs)
};

// Solve one inner problem per candidate BS (A_n is the same total price for
// all of them; only the interference seen at the candidate changes) and keep
// the best. Ties within eps keep the current association.
BsChoice select_best_bs(const NetworkState& st, const ChannelSet& ch,
                        const ScenarioConfig& cfg, int n,
                        const std::vector<int>& candidates,
                        const std::vector<UtilitySpec>& specs, double eps);

}  // namespace hetnet

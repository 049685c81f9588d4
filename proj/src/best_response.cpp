#include "hetnet/best_response.hpp"

#include <cmath>
#include <string>

namespace hetnet {
namespace {

// Regularizer when A is singular: strictly above the Cholesky pivot
// threshold so that A + mu I factors even when A is exactly zero.
constexpr double kMuFloor = 2e-12;
constexpr double kWaterEps = 1e-10;    // water-level bisection tolerance
constexpr int kMaxDoublings = 60;
constexpr int kMaxBisections = 500;

// Rate in the diagonal coordinates at water level c, counting only the
// channels the water actually covers: sum of ln(c delta_i^2) over c delta_i^2 > 1.
double diag_rate(const arma::vec& delta, double c) {
  double r = 0.0;
  for (arma::uword i = 0; i < delta.n_elem; ++i) {
    const double d2 = delta(i) * delta(i);
    if (d2 > 0.0 && c * d2 > 1.0) r += std::log(c * d2);
  }
  return r;
}

}  // namespace

DiagonalizedProblem diagonalize(const InnerProblem& p, double mu) {
  const arma::uword t = p.direct_channel.n_cols;
  arma::cx_mat a_mu = hermitize(p.total_price);
  a_mu.diag() += mu;

  arma::cx_mat l_lower;
  try {
    l_lower = cholesky_factor(a_mu);
  } catch (const NotPositiveDefinite&) {
    if (mu <= 0.0) {
      throw DegenerateRegularizer(
          "price matrix is singular and mu = 0; retry with a positive mu");
    }
    throw;
  }

  DiagonalizedProblem dp;
  dp.l = l_lower.t();  // upper triangular, A + mu I = l^H l
  const arma::cx_mat b = cholesky_factor(hermitize(p.interference));
  const arma::cx_mat x =
      arma::solve(arma::trimatl(b), p.direct_channel) * arma::inv(arma::trimatu(dp.l));
  const SvdFactors f = svd_factor(x);
  dp.m = f.v;  // full T x T
  dp.delta.zeros(t);
  for (arma::uword i = 0; i < f.sigma.n_elem && i < t; ++i) dp.delta(i) = f.sigma(i);
  dp.c3 = 0.0;
  return dp;
}

double solve_c_star(const DiagonalizedProblem& dp, const UtilitySpec& utility,
                    double c3, double eps) {
  if (arma::all(dp.delta == 0.0)) {
    throw NoPositiveGain("every diagonal channel gain is zero");
  }
  if (utility.kind == UtilityKind::wsr) {
    return utility.weight;  // constant slope, no fixed point search needed
  }

  // g(c) = alpha(rate(c) + c3) - c is strictly decreasing with g(0) > 0, so
  // the root is bracketed by doubling and then bisected.
  auto g = [&](double c) {
    return utility_alpha(utility, diag_rate(dp.delta, c) + c3) - c;
  };

  double c_lo = 0.0;
  double c_hi = utility_alpha(utility, c3) + 1.0;
  int doublings = 0;
  while (g(c_hi) > 0.0) {
    c_hi *= 2.0;
    if (++doublings > kMaxDoublings) {
      throw BracketFailure("water level bracket did not close below c = " +
                           std::to_string(c_hi));
    }
  }

  double mid = 0.5 * (c_lo + c_hi);
  for (int it = 0; it < kMaxBisections; ++it) {
    mid = 0.5 * (c_lo + c_hi);
    const double gm = g(mid);
    if (std::abs(gm) <= eps || (c_hi - c_lo) <= eps * std::max(1.0, mid)) break;
    if (gm > 0.0) {
      c_lo = mid;
    } else {
      c_hi = mid;
    }
  }
  return mid;
}

InnerSolution solve_inner_covariance(const InnerProblem& p, double mu) {
  const arma::uword t = p.direct_channel.n_cols;
  const DiagonalizedProblem dp = diagonalize(p, mu);

  InnerSolution sol;
  if (arma::all(dp.delta == 0.0)) {
    sol.s = arma::cx_mat(t, t, arma::fill::zeros);
    sol.trace = 0.0;
    return sol;
  }

  const double c_star = solve_c_star(dp, p.utility, dp.c3, kWaterEps);
  arma::vec s_hat(t, arma::fill::zeros);
  for (arma::uword i = 0; i < t; ++i) {
    const double d2 = dp.delta(i) * dp.delta(i);
    if (d2 > 0.0) s_hat(i) = std::max(c_star - 1.0 / d2, 0.0);
  }

  const arma::cx_mat li = arma::inv(arma::trimatu(dp.l));
  const arma::cx_mat in_basis = dp.m * arma::diagmat(s_hat) * dp.m.t();
  sol.s = hermitize(li * in_basis * li.t());
  sol.trace = std::real(arma::trace(sol.s));
  return sol;
}

UserSolution solve_user_covariance(const InnerProblem& p, double eps) {
  double mu_base = 0.0;
  InnerSolution base;
  try {
    base = solve_inner_covariance(p, mu_base);
  } catch (const DegenerateRegularizer&) {
    mu_base = kMuFloor;
    base = solve_inner_covariance(p, mu_base);
  }
  const double budget = p.power_budget;
  if (base.trace <= budget) {
    return {base.s, mu_base};
  }

  // tr S(mu) is nonincreasing in mu; find an upper end with a feasible trace.
  double mu_lo = std::max(mu_base, kMuFloor);
  double mu_hi = std::max(1.0, 2.0 * mu_lo);
  InnerSolution at_hi = solve_inner_covariance(p, mu_hi);
  int doublings = 0;
  while (at_hi.trace > budget) {
    mu_hi *= 2.0;
    if (++doublings > kMaxDoublings) {
      throw BracketFailure("power multiplier bracket did not close below mu = " +
                           std::to_string(mu_hi));
    }
    at_hi = solve_inner_covariance(p, mu_hi);
  }

  InnerSolution feasible = at_hi;  // always satisfies the budget
  double mu_feasible = mu_hi;
  InnerSolution last = at_hi;
  double mu_last = mu_hi;
  for (int it = 0; it < kMaxBisections; ++it) {
    const double mid = 0.5 * (mu_lo + mu_hi);
    last = solve_inner_covariance(p, mid);
    mu_last = mid;
    if (last.trace > budget) {
      mu_lo = mid;
    } else {
      mu_hi = mid;
      feasible = last;
      mu_feasible = mid;
    }
    if (std::abs(last.trace - budget) <= eps * std::max(1.0, budget) ||
        (mu_hi - mu_lo) <= eps * std::max(1.0, mu_hi)) {
      break;
    }
  }
  if (last.trace <= budget + 1e-9 * std::max(1.0, budget)) {
    return {last.s, mu_last};
  }
  return {feasible.s, mu_feasible};
}

double priced_utility(const InnerProblem& p, const arma::cx_mat& s) {
  const arma::cx_mat c = hermitize(p.interference);
  const arma::cx_mat full = hermitize(c + p.direct_channel * s * p.direct_channel.t());
  const double rate = std::max(0.0, logdet(full) - logdet(c));
  return utility_eval(p.utility, rate) -
         std::real(arma::trace(p.total_price * s));
}

double lagrangian_value(const InnerProblem& p, const arma::cx_mat& s, double mu) {
  return priced_utility(p, s) - mu * std::real(arma::trace(s));
}

BsChoice select_best_bs(const NetworkState& st, const ChannelSet& ch,
                        const ScenarioConfig& cfg, int n,
                        const std::vector<int>& candidates,
                        const std::vector<UtilitySpec>& specs, double eps) {
  const arma::cx_mat a = total_price(st.prices, n);

  BsChoice best;
  bool have_best = false;
  BsChoice current;
  bool have_current = false;

  for (int q : candidates) {
    InnerProblem ip;
    ip.direct_channel = ch.of(q, n);
    ip.interference = interference_cov(st, ch, cfg, n, q);
    ip.total_price = a;
    ip.power_budget = cfg.budget();
    ip.utility = specs[n];

    const UserSolution us = solve_user_covariance(ip, cfg.tol.bisection_eps);
    const double value = priced_utility(ip, us.s);
    if (!have_best || value > best.value) {
      best = {us.s, q, value};
      have_best = true;
    }
    if (q == st.assoc[n]) {
      current = {us.s, q, value};
      have_current = true;
    }
  }
  if (!have_best) {
    throw ConfigError("user " + std::to_string(n) + " has no candidate BS");
  }
  // Keep the current association unless the best alternative clears it by eps.
  if (have_current && best.bs != current.bs && current.value >= best.value - eps) {
    return current;
  }
  return best;
}

}  // namespace hetnet

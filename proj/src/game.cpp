#include "hetnet/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

namespace hetnet {
namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Orthonormal Hermitian basis of T x T: unit diagonal entries, then the
// symmetric and antisymmetric off-diagonal pairs, each with unit Frobenius norm.
std::vector<arma::cx_mat> hermitian_basis(int t) {
  std::vector<arma::cx_mat> basis;
  basis.reserve(static_cast<std::size_t>(t) * t);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < t; ++i) {
    arma::cx_mat b(t, t, arma::fill::zeros);
    b(i, i) = 1.0;
    basis.push_back(b);
  }
  for (int i = 0; i < t; ++i) {
    for (int j = i + 1; j < t; ++j) {
      arma::cx_mat b(t, t, arma::fill::zeros);
      b(i, j) = inv_sqrt2;
      b(j, i) = inv_sqrt2;
      basis.push_back(b);
      arma::cx_mat c(t, t, arma::fill::zeros);
      c(i, j) = arma::cx_double(0.0, inv_sqrt2);
      c(j, i) = arma::cx_double(0.0, -inv_sqrt2);
      basis.push_back(c);
    }
  }
  return basis;
}

InnerProblem make_inner(const NetworkState& st, const ChannelSet& ch,
                        const ScenarioConfig& cfg,
                        const std::vector<UtilitySpec>& specs, int n, int q) {
  InnerProblem ip;
  ip.direct_channel = ch.of(q, n);
  ip.interference = interference_cov(st, ch, cfg, n, q);
  ip.total_price = total_price(st.prices, n);
  ip.power_budget = cfg.budget();
  ip.utility = specs[n];
  return ip;
}

}  // namespace

std::vector<std::vector<int>> candidate_lists(const ChannelSet& ch,
                                              const ScenarioConfig& cfg) {
  std::vector<std::vector<int>> lists(cfg.num_users);
  for (int n = 0; n < cfg.num_users; ++n) {
    lists[n] = candidate_bs_from_channels(ch, n, cfg.candidate_bs_limit);
  }
  return lists;
}

NetworkState init_state(const ScenarioConfig& cfg, const ChannelSet& ch, Rng& rng) {
  const auto candidates = candidate_lists(ch, cfg);
  NetworkState st;
  st.assoc.resize(cfg.num_users);
  st.covariance.resize(cfg.num_users);
  const double trace_target = 0.9 * cfg.budget();
  for (int n = 0; n < cfg.num_users; ++n) {
    if (cfg.init_mode == InitMode::random) {
      st.assoc[n] = candidates[n][rng.uniform_index(candidates[n].size())];
      arma::cx_mat g(cfg.tx_antennas, cfg.tx_antennas);
      for (auto& v : g) v = rng.cnormal(1.0);
      arma::cx_mat s = g * g.t();
      const double tr = std::real(arma::trace(s));
      if (tr > 0.0) {
        st.covariance[n] = hermitize(s * (trace_target / tr));
      } else {
        st.covariance[n] =
            arma::cx_mat(cfg.tx_antennas, cfg.tx_antennas, arma::fill::eye) *
            (trace_target / cfg.tx_antennas);
      }
    } else {
      st.assoc[n] = candidates[n][0];
      st.covariance[n] =
          arma::cx_mat(cfg.tx_antennas, cfg.tx_antennas, arma::fill::eye) *
          (trace_target / cfg.tx_antennas);
    }
  }
  st.prices = PriceMap::zeros(cfg);
  return st;
}

StepResult game_step(NetworkState& st, const ChannelSet& ch,
                     const ScenarioConfig& cfg,
                     const std::vector<UtilitySpec>& specs,
                     const std::vector<std::vector<int>>& candidates, int n) {
  const InnerProblem ip_old = make_inner(st, ch, cfg, specs, n, st.assoc[n]);
  const double value_old = priced_utility(ip_old, st.covariance[n]);

  BsChoice choice;
  if (cfg.mode == GameMode::joint) {
    choice = select_best_bs(st, ch, cfg, n, candidates[n], specs,
                            cfg.tol.convergence_eps);
  } else {
    const std::vector<int> own{st.assoc[n]};
    choice = select_best_bs(st, ch, cfg, n, own, specs, cfg.tol.convergence_eps);
  }

  StepResult res;
  if (choice.value > value_old) {
    res.switched = choice.bs != st.assoc[n];
    res.gap = choice.value - value_old;
    st.covariance[n] = choice.s;
    st.assoc[n] = choice.bs;
  }
  // Reprice after every update so the next user sees consistent charges.
  st.prices = all_prices(st, ch, cfg, specs);
  return res;
}

RunResult run_game(const ScenarioConfig& cfg, const ChannelSet& ch) {
  const std::vector<UtilitySpec> specs = cfg.utility_specs();
  const auto candidates = candidate_lists(ch, cfg);

  Rng init_rng(cfg.seed, Substream::init);
  Rng order_rng(cfg.seed, Substream::user_order);

  RunResult run;
  run.state = init_state(cfg, ch, init_rng);
  GameTrace& trace = run.trace;

  int iter = 0;
  int switches_cum = 0;
  std::vector<int> order(cfg.num_users);
  std::iota(order.begin(), order.end(), 0);

  for (int sweep = 1; sweep <= cfg.tol.max_sweeps; ++sweep) {
    if (cfg.user_order == UserOrder::random) {
      for (int i = cfg.num_users - 1; i > 0; --i) {
        const int j = static_cast<int>(order_rng.uniform_index(i + 1));
        std::swap(order[i], order[j]);
      }
    }
    double sweep_max_gap = 0.0;
    int sweep_switches = 0;
    for (int n : order) {
      const StepResult r = game_step(run.state, ch, cfg, specs, candidates, n);
      ++iter;
      if (r.switched) {
        ++switches_cum;
        ++sweep_switches;
      }
      sweep_max_gap = std::max(sweep_max_gap, r.gap);
      TraceRecord rec;
      rec.iter = iter;
      rec.user = n;
      rec.sum_utility = sum_utility(run.state, ch, cfg, specs).sum_utility;
      rec.assoc = run.state.assoc;
      rec.switches = switches_cum;
      rec.gap = r.gap;
      trace.records.push_back(std::move(rec));
    }
    trace.sweeps = sweep;
    if (sweep_max_gap < cfg.tol.convergence_eps && sweep_switches == 0) {
      trace.converged = true;
      break;
    }
  }
  if (!trace.converged) {
    throw MaxSweepsExceeded("no convergence after " +
                                std::to_string(cfg.tol.max_sweeps) + " sweeps",
                            trace, run.state);
  }
  return run;
}

NeReport verify_ne(const NetworkState& st, const ChannelSet& ch,
                   const ScenarioConfig& cfg, double tol) {
  const std::vector<UtilitySpec> specs = cfg.utility_specs();
  const auto candidates = candidate_lists(ch, cfg);

  NeReport rep;
  for (int n = 0; n < cfg.num_users; ++n) {
    const InnerProblem ip = make_inner(st, ch, cfg, specs, n, st.assoc[n]);
    const double value_cur = priced_utility(ip, st.covariance[n]);
    const std::vector<int> space =
        cfg.mode == GameMode::joint ? candidates[n] : std::vector<int>{st.assoc[n]};
    const BsChoice best = select_best_bs(st, ch, cfg, n, space, specs, 0.0);
    rep.max_user_gap = std::max(rep.max_user_gap,
                                std::max(0.0, best.value - value_cur));
  }
  for (int q = 0; q < cfg.num_bs; ++q) {
    for (int n = 0; n < cfg.num_users; ++n) {
      const arma::cx_mat fresh = price_matrix(st, ch, cfg, q, n, specs);
      rep.max_price_residual =
          std::max(rep.max_price_residual,
                   arma::norm(st.prices.of(q, n) - fresh, "fro"));
    }
  }
  rep.is_ne = rep.max_user_gap <= tol && rep.max_price_residual <= tol;
  return rep;
}

std::vector<double> kkt_residual(const NetworkState& st, const ChannelSet& ch,
                                 const ScenarioConfig& cfg) {
  const std::vector<UtilitySpec> specs = cfg.utility_specs();
  const auto basis = hermitian_basis(cfg.tx_antennas);
  const double budget = cfg.budget();

  std::vector<double> residuals(cfg.num_users, 0.0);
  for (int n = 0; n < cfg.num_users; ++n) {
    const arma::cx_mat s_n = st.covariance[n];
    const double h = 1e-5 * (1.0 + arma::norm(s_n, "fro"));

    auto value_at = [&](const arma::cx_mat& s) {
      NetworkState probe = st;
      probe.covariance[n] = s;
      return sum_utility(probe, ch, cfg, specs).sum_utility;
    };

    arma::cx_mat grad(cfg.tx_antennas, cfg.tx_antennas, arma::fill::zeros);
    for (const auto& b : basis) {
      const double hi = value_at(hermitize(s_n + h * b));
      const double lo = value_at(hermitize(s_n - h * b));
      grad += ((hi - lo) / (2.0 * h)) * b;
    }

    const arma::cx_mat stepped = project_psd_trace_ball(s_n + grad, budget);
    residuals[n] = arma::norm(s_n - stepped, "fro") +
                   std::max(0.0, std::real(arma::trace(s_n)) - budget);
  }
  return residuals;
}

void write_trace_csv(const GameTrace& trace, std::ostream& out) {
  constexpr double kLn2 = 0.69314718055994530942;
  out << "iter,user,sum_utility_nats,sum_utility_bits_equiv,switches,max_gap\n";
  for (const auto& r : trace.records) {
    out << r.iter << ',' << r.user << ',' << fmt(r.sum_utility) << ','
        << fmt(r.sum_utility / kLn2) << ',' << r.switches << ',' << fmt(r.gap)
        << '\n';
  }
}

}  // namespace hetnet

#pragma once
// Interference / received covariances, MMSE matrices, per-user achievable
// rates (nats), and the system sum utility.

#include <vector>

#include "hetnet/matrix_ops.hpp"
#include "hetnet/scenario.hpp"

namespace hetnet {

// Interference prices T_{q,n} (T_n x T_n each), indexed like ChannelSet.
struct PriceMap {
  int num_bs = 0;
  int num_users = 0;
  std::vector<arma::cx_mat> t;

  const arma::cx_mat& of(int q, int n) const { return t[q * num_users + n]; }
  arma::cx_mat& of(int q, int n) { return t[q * num_users + n]; }

  static PriceMap zeros(const ScenarioConfig& cfg);
};

struct NetworkState {
  std::vector<arma::cx_mat> covariance;  // S_n, T_n x T_n, PSD, tr <= budget
  std::vector<int> assoc;                // a_n in {0..Q-1}
  PriceMap prices;
};

// C_n at BS q: sigma^2 I + sum over m != n of H_{q,m} S_m H_{q,m}^H. This is
// what user n would see if it selected q; every other user interferes there
// no matter where it is served.
arma::cx_mat interference_cov(const NetworkState& s, const ChannelSet& ch,
                              const ScenarioConfig& cfg, int n, int q);

// G_q: sigma^2 I + sum over all users l of H_{q,l} S_l H_{q,l}^H.
arma::cx_mat received_cov(const NetworkState& s, const ChannelSet& ch,
                          const ScenarioConfig& cfg, int q);

// E_n = I - (S_n^{1/2})^H H^H G^{-1} H S_n^{1/2} at the serving BS; positive
// definite, and -logdet(E_n) equals the rate.
arma::cx_mat mmse_matrix(const NetworkState& s, const ChannelSet& ch,
                         const ScenarioConfig& cfg, int n);

// R_n = logdet(I + H S_n H^H C_n^{-1}) at the serving BS, in nats, >= 0.
double user_rate(const NetworkState& s, const ChannelSet& ch,
                 const ScenarioConfig& cfg, int n);

struct RateReport {
  std::vector<double> rate_nats;
  std::vector<double> utility;
  double sum_utility = 0.0;  // f(S, a)
};

RateReport sum_utility(const NetworkState& s, const ChannelSet& ch,
                       const ScenarioConfig& cfg,
                       const std::vector<UtilitySpec>& specs);

}  // namespace hetnet

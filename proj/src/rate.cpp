#include "hetnet/rate.hpp"

#include <cmath>
#include <string>

namespace hetnet {

PriceMap PriceMap::zeros(const ScenarioConfig& cfg) {
  PriceMap p;
  p.num_bs = cfg.num_bs;
  p.num_users = cfg.num_users;
  p.t.resize(static_cast<std::size_t>(cfg.num_bs) * cfg.num_users);
  for (int q = 0; q < cfg.num_bs; ++q) {
    for (int n = 0; n < cfg.num_users; ++n) {
      p.of(q, n) = arma::cx_mat(cfg.tx_antennas, cfg.tx_antennas, arma::fill::zeros);
    }
  }
  return p;
}

arma::cx_mat interference_cov(const NetworkState& s, const ChannelSet& ch,
                              const ScenarioConfig& cfg, int n, int q) {
  arma::cx_mat c(cfg.rx_at(q), cfg.rx_at(q), arma::fill::eye);
  c *= cfg.noise_power;
  for (int m = 0; m < cfg.num_users; ++m) {
    if (m == n) continue;
    const arma::cx_mat& h = ch.of(q, m);
    c += h * s.covariance[m] * h.t();
  }
  return hermitize(c);
}

arma::cx_mat received_cov(const NetworkState& s, const ChannelSet& ch,
                          const ScenarioConfig& cfg, int q) {
  arma::cx_mat g(cfg.rx_at(q), cfg.rx_at(q), arma::fill::eye);
  g *= cfg.noise_power;
  for (int m = 0; m < cfg.num_users; ++m) {
    const arma::cx_mat& h = ch.of(q, m);
    g += h * s.covariance[m] * h.t();
  }
  return hermitize(g);
}

arma::cx_mat mmse_matrix(const NetworkState& s, const ChannelSet& ch,
                         const ScenarioConfig& cfg, int n) {
  // E = I - (S^{1/2})^H H^H G^{-1} H S^{1/2} = (I + X^H C^{-1} X)^{-1} with
  // X = H S^{1/2}. The second form stays accurate when the received
  // covariance G is dominated by a single strong user, where forming
  // I minus a near-identity product cancels catastrophically.
  const int q = s.assoc[n];
  const arma::cx_mat c = interference_cov(s, ch, cfg, n, q);
  const arma::cx_mat x = ch.of(q, n) * psd_sqrt(s.covariance[n]);
  arma::cx_mat b;
  try {
    b = cholesky_factor(c);
  } catch (const NotPositiveDefinite&) {
    throw SingularReceivedCovariance("received covariance at BS " +
                                     std::to_string(q) + " is singular");
  }
  const arma::cx_mat z = arma::solve(arma::trimatl(b), x);
  arma::cx_mat inner(cfg.tx_antennas, cfg.tx_antennas, arma::fill::eye);
  inner += z.t() * z;
  arma::cx_mat e;
  if (!arma::inv_sympd(e, hermitize(inner))) {
    throw SingularReceivedCovariance("received covariance at BS " +
                                     std::to_string(q) + " is singular");
  }
  return hermitize(e);
}

double user_rate(const NetworkState& s, const ChannelSet& ch,
                 const ScenarioConfig& cfg, int n) {
  const int q = s.assoc[n];
  const arma::cx_mat c = interference_cov(s, ch, cfg, n, q);
  const arma::cx_mat& h = ch.of(q, n);
  const arma::cx_mat full = hermitize(c + h * s.covariance[n] * h.t());
  double ld_c = 0.0, ld_full = 0.0;
  try {
    ld_c = logdet(c);
    ld_full = logdet(full);
  } catch (const NotPositiveDefinite&) {
    throw SingularInterferenceCovariance(
        "interference covariance for user " + std::to_string(n) + " at BS " +
        std::to_string(q) + " is not positive definite");
  }
  return std::max(0.0, ld_full - ld_c);
}

RateReport sum_utility(const NetworkState& s, const ChannelSet& ch,
                       const ScenarioConfig& cfg,
                       const std::vector<UtilitySpec>& specs) {
  RateReport rep;
  rep.rate_nats.resize(cfg.num_users);
  rep.utility.resize(cfg.num_users);
  rep.sum_utility = 0.0;
  for (int n = 0; n < cfg.num_users; ++n) {
    const double r = user_rate(s, ch, cfg, n);
    if (!std::isfinite(r)) {
      throw DomainError("non-finite rate for user " + std::to_string(n));
    }
    rep.rate_nats[n] = r;
    rep.utility[n] = utility_eval(specs[n], r);
    rep.sum_utility += rep.utility[n];
  }
  return rep;
}

}  // namespace hetnet

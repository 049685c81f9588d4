#include "hetnet/pricing.hpp"

#include <cmath>
#include <string>

#include "hetnet/utility.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hetnet {
namespace {

// Per-BS inner weights: for each user m served by q,
//   W_m = alpha_m G_q^{-1} X_m E_m^{-1} X_m^H G_q^{-1},  X_m = H_{q,m} S_m^{1/2}.
// Evaluated through the identity G^{-1} X = C_m^{-1} X E_m, which collapses the
// weight to
//   W_m = alpha_m C_m^{-1} X_m E_m X_m^H C_m^{-1}
// with no explicit E_m^{-1} or G_q^{-1}. When one served user is much stronger
// than the noise floor, G is ill conditioned and E_m is nearly singular, so the
// direct form loses every significant digit; the collapsed form only touches
// well-scaled factors. E_m = (I + X^H C^{-1} X)^{-1} is applied through the
// eigendecomposition of X^H C^{-1} X, which also yields the rate as
// sum log(1 + d_i) for the price weight alpha_m = f_m'(R_m).
// price_matrix and all_prices share this routine so that recomputing a single
// entry reproduces the batch value bit for bit.
struct BsWeights {
  std::vector<int> served;
  std::vector<arma::cx_mat> w;  // parallel to served
};

BsWeights bs_weights(const NetworkState& s, const ChannelSet& ch,
                     const ScenarioConfig& cfg, int q,
                     const std::vector<UtilitySpec>& specs) {
  BsWeights out;
  for (int m = 0; m < cfg.num_users; ++m) {
    if (s.assoc[m] == q) out.served.push_back(m);
  }
  if (out.served.empty()) return out;

  for (int m : out.served) {
    const arma::cx_mat c = interference_cov(s, ch, cfg, m, q);
    const arma::cx_mat x = ch.of(q, m) * psd_sqrt(s.covariance[m]);
    arma::cx_mat b;
    try {
      b = cholesky_factor(c);
    } catch (const NotPositiveDefinite&) {
      throw SingularReceivedCovariance("received covariance at BS " +
                                       std::to_string(q) + " is singular");
    }
    const arma::cx_mat z = arma::solve(arma::trimatl(b), x);
    const arma::cx_mat k = hermitize(z.t() * z);  // X^H C^{-1} X

    arma::vec d;
    arma::cx_mat u;
    if (!arma::eig_sym(d, u, k)) {
      throw SingularReceivedCovariance("received covariance at BS " +
                                       std::to_string(q) + " is singular");
    }
    double rate = 0.0;
    for (arma::uword i = 0; i < d.n_elem; ++i) {
      rate += std::log1p(std::max(0.0, d(i)));
    }
    const double alpha = utility_alpha(specs[m], rate);

    const arma::cx_mat cx = arma::solve(arma::trimatu(b.t()), z);  // C^{-1} X
    const arma::cx_mat y = cx * u;
    const arma::vec scale = 1.0 / (1.0 + arma::clamp(d, 0.0, arma::datum::inf));
    out.w.push_back(alpha * hermitize(y * arma::diagmat(scale) * y.t()));
  }
  return out;
}

arma::cx_mat price_from_weights(const BsWeights& bw, const ChannelSet& ch,
                                const ScenarioConfig& cfg, int q, int n) {
  arma::cx_mat inner(cfg.rx_at(q), cfg.rx_at(q), arma::fill::zeros);
  bool any = false;
  for (std::size_t k = 0; k < bw.served.size(); ++k) {
    if (bw.served[k] == n) continue;
    inner += bw.w[k];
    any = true;
  }
  if (!any) {
    return arma::cx_mat(cfg.tx_antennas, cfg.tx_antennas, arma::fill::zeros);
  }
  const arma::cx_mat& h = ch.of(q, n);
  return hermitize(h.t() * inner * h);
}

}  // namespace

arma::cx_mat price_matrix(const NetworkState& s, const ChannelSet& ch,
                          const ScenarioConfig& cfg, int q, int n,
                          const std::vector<UtilitySpec>& specs) {
  return price_from_weights(bs_weights(s, ch, cfg, q, specs), ch, cfg, q, n);
}

PriceMap all_prices(const NetworkState& s, const ChannelSet& ch,
                    const ScenarioConfig& cfg,
                    const std::vector<UtilitySpec>& specs, ExecPolicy policy) {
  PriceMap prices = PriceMap::zeros(cfg);
  if (policy == ExecPolicy::openmp) {
#pragma omp parallel for schedule(static)
    for (int q = 0; q < cfg.num_bs; ++q) {
      const BsWeights bw = bs_weights(s, ch, cfg, q, specs);
      for (int n = 0; n < cfg.num_users; ++n) {
        prices.of(q, n) = price_from_weights(bw, ch, cfg, q, n);
      }
    }
  } else {
    for (int q = 0; q < cfg.num_bs; ++q) {
      const BsWeights bw = bs_weights(s, ch, cfg, q, specs);
      for (int n = 0; n < cfg.num_users; ++n) {
        prices.of(q, n) = price_from_weights(bw, ch, cfg, q, n);
      }
    }
  }
  return prices;
}

arma::cx_mat total_price(const PriceMap& prices, int n) {
  arma::cx_mat a = prices.of(0, n);
  for (int q = 1; q < prices.num_bs; ++q) a += prices.of(q, n);
  return hermitize(a);
}

std::vector<double> lemma2_convexity_probe(const NetworkState& s,
                                           const ChannelSet& ch,
                                           const ScenarioConfig& cfg, int m,
                                           int n, const arma::cx_mat& direction,
                                           const std::vector<double>& steps) {
  // E_m(S_base)^{-1} = I + X^H C^{-1} X; built directly rather than by
  // inverting the MMSE matrix, which is nearly singular at high rates.
  const int qm = s.assoc[m];
  const arma::cx_mat c = interference_cov(s, ch, cfg, m, qm);
  const arma::cx_mat x = ch.of(qm, m) * psd_sqrt(s.covariance[m]);
  arma::cx_mat b;
  try {
    b = cholesky_factor(c);
  } catch (const NotPositiveDefinite&) {
    throw SingularReceivedCovariance("received covariance at BS " +
                                     std::to_string(qm) + " is singular");
  }
  const arma::cx_mat z = arma::solve(arma::trimatl(b), x);
  arma::cx_mat ei(cfg.tx_antennas, cfg.tx_antennas, arma::fill::eye);
  ei += z.t() * z;
  ei = hermitize(ei);

  const arma::cx_mat s_n = s.covariance[n];
  const double h = 3e-4 * (1.0 + arma::norm(s_n, "fro"));

  // phi(t) = -tr[E_m(S_base)^{-1} E_m(S_n + t D)]; convex in t wherever the
  // shifted covariance stays PSD.
  auto phi = [&](double t) {
    const arma::cx_mat cand = hermitize(s_n + t * direction);
    if (min_eigenvalue(cand) < -1e-12) {
      throw InfeasibleDirection("S_n + t D leaves the PSD cone at t = " +
                                std::to_string(t));
    }
    NetworkState shifted = s;
    shifted.covariance[n] = psd_project(cand);
    const arma::cx_mat e = mmse_matrix(shifted, ch, cfg, m);
    return -std::real(arma::trace(ei * e));
  };

  std::vector<double> second_diffs;
  second_diffs.reserve(steps.size());
  for (double t : steps) {
    const double lo = phi(t - h);
    const double mid = phi(t);
    const double hi = phi(t + h);
    second_diffs.push_back((lo - 2.0 * mid + hi) / (h * h));
  }
  return second_diffs;
}

}  // namespace hetnet

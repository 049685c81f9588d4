#pragma once
// BS-side interference prices: T_{q,n} is the negative marginal effect of
// user n's transmit covariance on the summed utility of the users BS q
// serves. Computed in closed form from G_q, the served users' MMSE matrices,
// and their utility slopes alpha_m.

#include "hetnet/exec.hpp"
#include "hetnet/rate.hpp"

namespace hetnet {

// T_{q,n} = H_{q,n}^H [ sum over m served by q, m != n, of
//            alpha_m G_q^{-1} H_{q,m} S_m^{1/2} E_m^{-1} (S_m^{1/2})^H
//            H_{q,m}^H G_q^{-1} ] H_{q,n};  PSD, T_n x T_n.
arma::cx_mat price_matrix(const NetworkState& s, const ChannelSet& ch,
                          const ScenarioConfig& cfg, int q, int n,
                          const std::vector<UtilitySpec>& specs);

// Every (q, n) pair. Distinct BSs are independent, so the openmp policy
// parallelizes over q; both policies run identical arithmetic.
PriceMap all_prices(const NetworkState& s, const ChannelSet& ch,
                    const ScenarioConfig& cfg,
                    const std::vector<UtilitySpec>& specs,
                    ExecPolicy policy = ExecPolicy::serial);

// A_n = sum over q of T_{q,n}: the total charge in the user's surplus.
arma::cx_mat total_price(const PriceMap& prices, int n);

// Second central differences of t -> -tr[E_m^{-1}(S) E_m(S_n + t D, S_-n)]
// along a Hermitian direction D, one value per probed step. Convexity of the
// map is what makes the prices upper-bound the utility loss, so the probe
// values must be (numerically) nonnegative. Throws InfeasibleDirection if
// S_n + t D leaves the PSD cone at a probed point.
std::vector<double> lemma2_convexity_probe(const NetworkState& s,
                                           const ChannelSet& ch,
                                           const ScenarioConfig& cfg, int m,
                                           int n, const arma::cx_mat& direction,
                                           const std::vector<double>& steps);

}  // namespace hetnet

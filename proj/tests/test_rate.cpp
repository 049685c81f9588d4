#include <doctest.h>

#include <cmath>

#include "hetnet/rate.hpp"
#include "support/oracles.hpp"

using namespace hetnet;

namespace {

// Two users, two BSs, fixed moderate channels; a small playground state.
struct Playground {
  ScenarioConfig cfg;
  ChannelSet ch;
  NetworkState st;

  explicit Playground(std::uint64_t seed, double channel_scale = 1.0) {
    cfg.num_users = 2;
    cfg.num_bs = 2;
    cfg.tx_antennas = 2;
    cfg.rx_antennas = {3};
    cfg.power_budget = 4.0;
    Rng rng(seed, Substream::test);
    ch.num_bs = 2;
    ch.num_users = 2;
    ch.h.resize(4);
    for (int q = 0; q < 2; ++q)
      for (int n = 0; n < 2; ++n)
        ch.of(q, n) = oracles::random_channel(rng, 3, 2, channel_scale);
    st.assoc = {0, 1};
    st.covariance.push_back(oracles::random_psd(rng, 2, 2.0));
    st.covariance.push_back(oracles::random_psd(rng, 2, 3.0));
    st.prices = PriceMap::zeros(cfg);
  }
};

}  // namespace

TEST_SUITE("rate") {

TEST_CASE("interference_cov excludes the probed user and received_cov keeps it") {
  Playground p(41);
  const arma::cx_mat c0 = interference_cov(p.st, p.ch, p.cfg, 0, 0);
  const arma::cx_mat& h1 = p.ch.of(0, 1);
  arma::cx_mat expect = p.cfg.noise_power * arma::cx_mat(3, 3, arma::fill::eye) +
                        h1 * p.st.covariance[1] * h1.t();
  CHECK(arma::norm(c0 - expect, "fro") <= 1e-12);

  const arma::cx_mat g = received_cov(p.st, p.ch, p.cfg, 0);
  const arma::cx_mat& h0 = p.ch.of(0, 0);
  expect += h0 * p.st.covariance[0] * h0.t();
  CHECK(arma::norm(g - expect, "fro") <= 1e-12);
}

TEST_CASE("minus logdet of the MMSE matrix equals the rate") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    Playground p(seed);
    for (int n = 0; n < 2; ++n) {
      const arma::cx_mat e = mmse_matrix(p.st, p.ch, p.cfg, n);
      CHECK(is_hermitian(e, 1e-10));
      CHECK(min_eigenvalue(e) > 0.0);
      CHECK(min_eigenvalue(arma::cx_mat(arma::cx_mat(2, 2, arma::fill::eye) - e)) >= -1e-10);
      CHECK(-logdet(e) == doctest::Approx(user_rate(p.st, p.ch, p.cfg, n)).epsilon(1e-9));
    }
  }
}

TEST_CASE("single user with identity noise matches the closed-form rate") {
  ScenarioConfig cfg;
  cfg.num_users = 1;
  cfg.num_bs = 1;
  cfg.tx_antennas = 2;
  cfg.rx_antennas = {2};
  ChannelSet ch;
  ch.num_bs = 1;
  ch.num_users = 1;
  ch.h.resize(1);
  arma::cx_mat h(2, 2, arma::fill::zeros);
  h(0, 0) = 2.0;
  h(1, 1) = 1.0;
  ch.of(0, 0) = h;
  NetworkState st;
  st.assoc = {0};
  st.covariance.push_back(arma::cx_mat(2, 2, arma::fill::eye));
  st.prices = PriceMap::zeros(cfg);
  // R = ln(1 + 4) + ln(1 + 1).
  CHECK(user_rate(st, ch, cfg, 0) ==
        doctest::Approx(std::log(5.0) + std::log(2.0)).epsilon(1e-12));

  st.covariance[0].zeros();
  CHECK(user_rate(st, ch, cfg, 0) == doctest::Approx(0.0));
}

TEST_CASE("rates stay finite and consistent under a dominant interferer") {
  // One interferer 4 orders of magnitude above the noise floor; the stable
  // MMSE evaluation must keep -logdet(E) equal to the rate.
  Playground p(77, 1.0);
  p.ch.of(1, 0) = 3.0e4 * p.ch.of(1, 0);  // user 0 blasts BS 1
  p.st.assoc = {1, 1};
  for (int n = 0; n < 2; ++n) {
    const double r = user_rate(p.st, p.ch, p.cfg, n);
    CHECK(std::isfinite(r));
    CHECK(r >= 0.0);
    const arma::cx_mat e = mmse_matrix(p.st, p.ch, p.cfg, n);
    CHECK(min_eigenvalue(e) > 0.0);
    // Two independent evaluation paths; at this dynamic range they can only
    // be expected to agree to a few ulps of the large logdet terms.
    CHECK(-logdet(e) == doctest::Approx(r).epsilon(1e-6));
  }
}

TEST_CASE("sum_utility reports per-user rates and the configured utility") {
  Playground p(42);
  p.cfg.utility_kind = UtilityKind::proportional_fair;
  const auto specs = p.cfg.utility_specs();
  const RateReport rep = sum_utility(p.st, p.ch, p.cfg, specs);
  REQUIRE(rep.rate_nats.size() == 2);
  double total = 0.0;
  for (int n = 0; n < 2; ++n) {
    CHECK(rep.rate_nats[n] == doctest::Approx(user_rate(p.st, p.ch, p.cfg, n)));
    CHECK(rep.utility[n] == doctest::Approx(std::log(rep.rate_nats[n])));
    total += rep.utility[n];
  }
  CHECK(rep.sum_utility == doctest::Approx(total));
}

TEST_CASE("price map zeros carries one square block per (bs, user) pair") {
  ScenarioConfig cfg;
  cfg.num_users = 3;
  cfg.num_bs = 2;
  cfg.tx_antennas = 2;
  cfg.rx_antennas = {4};
  const PriceMap p = PriceMap::zeros(cfg);
  CHECK(p.num_bs == 2);
  CHECK(p.num_users == 3);
  CHECK(p.t.size() == 6);
  CHECK(p.of(1, 2).n_rows == 2);
  CHECK(arma::norm(p.of(0, 1), "fro") == 0.0);
}

}  // TEST_SUITE

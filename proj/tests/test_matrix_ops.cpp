#include <doctest.h>

#include <cmath>

#include "hetnet/matrix_ops.hpp"
#include "hetnet/rng.hpp"
#include "support/oracles.hpp"

using namespace hetnet;

namespace {

arma::cx_mat random_hermitian(Rng& rng, int t, double scale) {
  arma::cx_mat g = oracles::random_channel(rng, t, t, scale);
  return hermitize(g);
}

}  // namespace

TEST_SUITE("matrix_ops") {

TEST_CASE("hermitize averages a matrix with its conjugate transpose") {
  arma::cx_mat m(2, 2);
  m(0, 0) = {1.0, 0.5};
  m(0, 1) = {2.0, 1.0};
  m(1, 0) = {0.0, 0.0};
  m(1, 1) = {3.0, -0.25};
  const arma::cx_mat h = hermitize(m);
  CHECK(is_hermitian(h));
  CHECK(h(0, 0).real() == doctest::Approx(1.0));
  CHECK(h(0, 0).imag() == doctest::Approx(0.0));
  CHECK(h(0, 1).real() == doctest::Approx(1.0));
  CHECK(h(0, 1).imag() == doctest::Approx(0.5));
  CHECK(h(1, 0) == std::conj(h(0, 1)));
}

TEST_CASE("is_hermitian rejects asymmetry beyond the tolerance") {
  arma::cx_mat m(2, 2, arma::fill::eye);
  CHECK(is_hermitian(m));
  m(0, 1) = {0.0, 1e-6};
  CHECK_FALSE(is_hermitian(m));
  CHECK(is_hermitian(m, 1e-5));
}

TEST_CASE("cholesky_factor reconstructs random positive definite matrices") {
  Rng rng(101, Substream::test);
  for (int rep = 0; rep < 20; ++rep) {
    const int t = 1 + rng.uniform_index(6);
    const arma::cx_mat a = oracles::random_psd(rng, t, 2.0 * t) +
                           0.1 * arma::cx_mat(t, t, arma::fill::eye);
    const arma::cx_mat l = cholesky_factor(a);
    CHECK(arma::norm(l - arma::cx_mat(arma::trimatl(l)), "fro") == 0.0);
    CHECK(arma::norm(l * l.t() - a, "fro") <= 1e-10 * arma::norm(a, "fro"));
  }
}

TEST_CASE("cholesky_factor throws on indefinite and on nearly singular input") {
  arma::cx_mat neg(2, 2, arma::fill::eye);
  neg(1, 1) = -1.0;
  CHECK_THROWS_AS(cholesky_factor(neg), NotPositiveDefinite);

  // Rank-one PSD matrix: the second pivot collapses to zero.
  arma::cx_mat rank1(2, 2);
  rank1(0, 0) = 1.0;
  rank1(0, 1) = 1.0;
  rank1(1, 0) = 1.0;
  rank1(1, 1) = 1.0;
  CHECK_THROWS_AS(cholesky_factor(rank1), NotPositiveDefinite);

  // Just above the pivot tolerance still factors.
  arma::cx_mat tiny(1, 1);
  tiny(0, 0) = 1e-11;
  CHECK(cholesky_factor(tiny)(0, 0).real() == doctest::Approx(std::sqrt(1e-11)));
}

TEST_CASE("svd_factor reconstructs and orders singular values") {
  Rng rng(102, Substream::test);
  for (auto [r, c] : {std::pair{4, 2}, std::pair{2, 4}, std::pair{3, 3}}) {
    const arma::cx_mat m = oracles::random_channel(rng, r, c, 1.0);
    const SvdFactors f = svd_factor(m);
    CHECK(static_cast<int>(f.v.n_rows) == c);
    CHECK(static_cast<int>(f.v.n_cols) == c);
    CHECK(arma::norm(f.v.t() * f.v - arma::cx_mat(c, c, arma::fill::eye), "fro") <= 1e-12);
    for (arma::uword i = 0; i + 1 < f.sigma.n_elem; ++i) {
      CHECK(f.sigma(i) >= f.sigma(i + 1));
    }
    CHECK(f.sigma.min() >= 0.0);
    const arma::cx_mat rebuilt =
        f.u.head_cols(f.sigma.n_elem) *
        arma::diagmat(arma::cx_vec(f.sigma, arma::vec(f.sigma.n_elem, arma::fill::zeros))) *
        f.v.head_cols(f.sigma.n_elem).t();
    CHECK(arma::norm(rebuilt - m, "fro") <= 1e-10 * (1.0 + arma::norm(m, "fro")));
  }
}

TEST_CASE("logdet matches the eigenvalue sum on positive definite input") {
  Rng rng(103, Substream::test);
  for (int rep = 0; rep < 10; ++rep) {
    const arma::cx_mat a = oracles::random_psd(rng, 4, 6.0) +
                           0.5 * arma::cx_mat(4, 4, arma::fill::eye);
    arma::vec ev;
    arma::eig_sym(ev, a);
    CHECK(logdet(a) == doctest::Approx(arma::sum(arma::log(ev))).epsilon(1e-10));
  }
  arma::cx_mat bad(2, 2, arma::fill::eye);
  bad(0, 0) = -2.0;
  CHECK_THROWS_AS(logdet(bad), NotPositiveDefinite);
}

TEST_CASE("psd_project clamps negative eigenvalues and is idempotent") {
  arma::cx_mat m(2, 2, arma::fill::zeros);
  m(0, 0) = 2.0;
  m(1, 1) = -3.0;
  const arma::cx_mat p = psd_project(m);
  CHECK(p(0, 0).real() == doctest::Approx(2.0));
  CHECK(p(1, 1).real() == doctest::Approx(0.0));
  CHECK(min_eigenvalue(p) >= -1e-14);
  CHECK(arma::norm(psd_project(p) - p, "fro") <= 1e-12);
}

TEST_CASE("psd_sqrt squares back to the input") {
  Rng rng(104, Substream::test);
  for (int rep = 0; rep < 10; ++rep) {
    const arma::cx_mat a = oracles::random_psd(rng, 3, 5.0);
    const arma::cx_mat r = psd_sqrt(a);
    CHECK(is_hermitian(r, 1e-10));
    CHECK(min_eigenvalue(r) >= -1e-12);
    CHECK(arma::norm(r * r - a, "fro") <= 1e-10 * (1.0 + arma::norm(a, "fro")));
  }
}

TEST_CASE("min_eigenvalue agrees with a diagonal readoff") {
  arma::cx_mat d(3, 3, arma::fill::zeros);
  d(0, 0) = 4.0;
  d(1, 1) = -0.5;
  d(2, 2) = 1.0;
  CHECK(min_eigenvalue(d) == doctest::Approx(-0.5));
}

TEST_CASE("project_psd_trace_ball matches the independent simplex projection") {
  Rng rng(105, Substream::test);
  for (int rep = 0; rep < 25; ++rep) {
    const int t = 1 + rng.uniform_index(4);
    const arma::cx_mat m = random_hermitian(rng, t, 2.0);
    const double power = rng.uniform(0.5, 4.0);
    const arma::cx_mat lib = project_psd_trace_ball(m, power);
    const arma::cx_mat ref = oracles::project_trace_ball(m, power);
    CHECK(arma::norm(lib - ref, "fro") <= 1e-9 * (1.0 + arma::norm(ref, "fro")));
    CHECK(min_eigenvalue(lib) >= -1e-12);
    CHECK(std::real(arma::trace(lib)) <= power + 1e-9);
  }
}

TEST_CASE("project_psd_trace_ball leaves feasible points unchanged") {
  Rng rng(106, Substream::test);
  const arma::cx_mat s = oracles::random_psd(rng, 3, 1.0);
  CHECK(arma::norm(project_psd_trace_ball(s, 2.0) - s, "fro") <= 1e-10);
}

}  // TEST_SUITE

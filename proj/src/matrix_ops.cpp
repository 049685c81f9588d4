#include "hetnet/matrix_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hetnet {

arma::cx_mat hermitize(const arma::cx_mat& m) { return 0.5 * (m + m.t()); }

bool is_hermitian(const arma::cx_mat& m, double tol) {
  if (!m.is_square()) return false;
  return arma::norm(m - m.t(), "fro") <= tol * std::max(1.0, arma::norm(m, "fro"));
}

arma::cx_mat cholesky_factor(const arma::cx_mat& m) {
  if (!m.is_square()) {
    throw DimensionMismatch("cholesky_factor: matrix must be square");
  }
  const arma::uword n = m.n_rows;
  arma::cx_mat l(n, n, arma::fill::zeros);
  for (arma::uword j = 0; j < n; ++j) {
    double d = m(j, j).real();
    for (arma::uword k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (d <= kPdPivotTol) {
      char msg[96];
      std::snprintf(msg, sizeof(msg), "cholesky_factor: pivot %g at column %llu",
                    d, static_cast<unsigned long long>(j));
      throw NotPositiveDefinite(msg);
    }
    const double piv = std::sqrt(d);
    l(j, j) = piv;
    for (arma::uword i = j + 1; i < n; ++i) {
      std::complex<double> acc = m(i, j);
      for (arma::uword k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
      l(i, j) = acc / piv;
    }
  }
  return l;
}

SvdFactors svd_factor(const arma::cx_mat& m) {
  SvdFactors f;
  if (!arma::svd(f.u, f.sigma, f.v, m, "std")) {
    // The divide-and-conquer fallback is more robust on some inputs.
    if (!arma::svd(f.u, f.sigma, f.v, m, "dc")) {
      throw HetnetError("svd_factor: decomposition failed");
    }
  }
  return f;
}

double logdet(const arma::cx_mat& m) {
  const arma::cx_mat l = cholesky_factor(m);
  double acc = 0.0;
  for (arma::uword i = 0; i < l.n_rows; ++i) acc += std::log(l(i, i).real());
  return 2.0 * acc;
}

arma::cx_mat psd_project(const arma::cx_mat& m) {
  arma::vec ev;
  arma::cx_mat vec;
  if (!arma::eig_sym(ev, vec, hermitize(m))) {
    throw HetnetError("psd_project: eigendecomposition failed");
  }
  ev.transform([](double x) { return x < 0.0 ? 0.0 : x; });
  return hermitize(vec * arma::diagmat(ev) * vec.t());
}

arma::cx_mat psd_sqrt(const arma::cx_mat& m) {
  arma::vec ev;
  arma::cx_mat vec;
  if (!arma::eig_sym(ev, vec, hermitize(m))) {
    throw HetnetError("psd_sqrt: eigendecomposition failed");
  }
  ev.transform([](double x) { return x < 0.0 ? 0.0 : std::sqrt(x); });
  return hermitize(vec * arma::diagmat(ev) * vec.t());
}

double min_eigenvalue(const arma::cx_mat& m) {
  arma::vec ev = arma::eig_sym(hermitize(m));
  return ev.min();
}

arma::cx_mat project_psd_trace_ball(const arma::cx_mat& m, double power) {
  arma::vec ev;
  arma::cx_mat vec;
  if (!arma::eig_sym(ev, vec, hermitize(m))) {
    throw HetnetError("project_psd_trace_ball: eigendecomposition failed");
  }
  arma::vec lam = ev;
  lam.transform([](double x) { return x < 0.0 ? 0.0 : x; });
  if (arma::accu(lam) > power) {
    // The trace cap binds: shift eigenvalues by the level tau solving
    // sum [ev_i - tau]^+ = power. With eigenvalues sorted descending, take
    // the largest k whose candidate level stays below the k-th eigenvalue.
    const arma::vec sorted = arma::sort(ev, "descend");
    const arma::vec prefix = arma::cumsum(sorted);
    double tau = (prefix(sorted.n_elem - 1) - power) / sorted.n_elem;
    for (arma::uword k = sorted.n_elem; k >= 1; --k) {
      const double cand = (prefix(k - 1) - power) / static_cast<double>(k);
      if (sorted(k - 1) > cand) {
        tau = cand;
        break;
      }
    }
    lam = ev - tau;
    lam.transform([](double x) { return x < 0.0 ? 0.0 : x; });
  }
  return hermitize(vec * arma::diagmat(lam) * vec.t());
}

}  // namespace hetnet

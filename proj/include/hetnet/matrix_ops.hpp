#pragma once
// Dense complex-Hermitian helpers shared by the whole library. Armadillo
// supplies SVD and eigendecompositions; the Cholesky factorization is written
// out so the positive-definiteness pivot threshold is explicit. Everything
// here is desk scale (matrices up to ~32x32), value semantics, thread safe.

#include <armadillo>

#include "hetnet/errors.hpp"

namespace hetnet {

// Pivots at or below this are treated as not positive definite.
inline constexpr double kPdPivotTol = 1e-12;

// (m + m^H) / 2; numerical hygiene after products that are Hermitian on paper.
arma::cx_mat hermitize(const arma::cx_mat& m);

bool is_hermitian(const arma::cx_mat& m, double tol = 1e-12);

// Lower-triangular L with L L^H = m. Throws NotPositiveDefinite as soon as a
// pivot falls at or below kPdPivotTol.
arma::cx_mat cholesky_factor(const arma::cx_mat& m);

struct SvdFactors {
  arma::cx_mat u;   // columns orthonormal
  arma::vec sigma;  // nonincreasing, >= 0
  arma::cx_mat v;   // square unitary
};

// m = u * diag(sigma) * v^H. v is always full (n_cols x n_cols) so callers
// can use it as a change of basis; sigma has min(rows, cols) entries.
SvdFactors svd_factor(const arma::cx_mat& m);

// Natural-log determinant of a Hermitian positive definite matrix.
double logdet(const arma::cx_mat& m);

// Eigenvalue clamp at zero; idempotent.
arma::cx_mat psd_project(const arma::cx_mat& m);

// Hermitian PSD square root (tiny negative eigenvalues clamped).
arma::cx_mat psd_sqrt(const arma::cx_mat& m);

double min_eigenvalue(const arma::cx_mat& m);

// Euclidean (Frobenius) projection onto {X Hermitian PSD, tr X <= power}.
// Used by the projected-gradient KKT residual and by test oracles.
arma::cx_mat project_psd_trace_ball(const arma::cx_mat& m, double power);

}  // namespace hetnet

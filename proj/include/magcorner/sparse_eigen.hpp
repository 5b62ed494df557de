#pragma once

#include <complex>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace magcorner::linalg {

using Complex = std::complex<double>;

struct EigenOptions {
  double shift = -0.05;        ///< factorization shift, must lie below the spectrum
  int krylov_dim = 40;         ///< Lanczos basis size per restart
  int max_restarts = 60;
  double residual_tol = 1e-8;  ///< Ritz residual of the shifted inverse, relative to its eigenvalue
  int n_eigs = 1;
};

template <typename Scalar>
struct EigenResult {
  Eigen::VectorXd values;  ///< ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  ///< M-orthonormal columns
  double residual = 0.0;   ///< largest relative residual among returned pairs
  int restarts = 0;
};

/// Smallest eigenpairs of the Hermitian pencil A x = lambda M x with M a positive
/// diagonal mass. Shift-invert Lanczos with full reorthogonalization and a
/// Cholesky factorization of the shifted matrix. The start vector is fixed, so
/// results are deterministic. Throws NoConvergence.
template <typename Scalar>
EigenResult<Scalar> lowest_eigenpairs(const Eigen::SparseMatrix<Scalar>& A, const Eigen::VectorXd& mass,
                                      const EigenOptions& opts = {});

}  // namespace magcorner::linalg

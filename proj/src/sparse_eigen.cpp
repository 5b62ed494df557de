#include "magcorner/sparse_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <type_traits>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#ifdef MAGCORNER_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

#include "magcorner/errors.hpp"

namespace magcorner::linalg {

namespace {

template <typename Scalar>
using SpMat = Eigen::SparseMatrix<Scalar>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

#ifdef MAGCORNER_HAVE_CHOLMOD
// The real supernodal path goes through the system dpotrf, which rejects
// positive definite input on some BLAS builds; real systems stay simplicial.
template <typename Scalar>
using Factor = std::conditional_t<std::is_same_v<Scalar, double>, Eigen::CholmodSimplicialLLT<SpMat<double>, Eigen::Lower>,
                                  Eigen::CholmodSupernodalLLT<SpMat<Scalar>, Eigen::Lower>>;
#else
template <typename Scalar>
using Factor = Eigen::SimplicialLDLT<SpMat<Scalar>, Eigen::Lower>;
#endif

template <typename Scalar>
Vec<Scalar> start_vector(Eigen::Index n) {
  Vec<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Scalar(1.0 + 1e-3 * static_cast<double>(i % 7));
  return v;
}

template <typename Scalar>
Vec<Scalar> random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if constexpr (std::is_same_v<Scalar, double>)
      v[i] = g(rng);
    else
      v[i] = Scalar(g(rng), g(rng));
  }
  return v;
}

// Two passes of classical Gram-Schmidt against the first `cols` columns.
template <typename Scalar>
void orthogonalize(const Mat<Scalar>& V, Eigen::Index cols, Vec<Scalar>& w) {
  if (cols == 0) return;
  for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(cols) * (V.leftCols(cols).adjoint() * w);
}

template <typename Scalar>
EigenResult<Scalar> dense_fallback(const SpMat<Scalar>& C, const Eigen::VectorXd& dinv, int n_eigs) {
  Mat<Scalar> dense = Mat<Scalar>(C);
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(dense);
  EigenResult<Scalar> out;
  const int k = std::min<int>(n_eigs, static_cast<int>(C.rows()));
  out.values = es.eigenvalues().head(k);
  out.vectors = dinv.asDiagonal() * es.eigenvectors().leftCols(k);
  return out;
}

}  // namespace

template <typename Scalar>
EigenResult<Scalar> lowest_eigenpairs(const SpMat<Scalar>& A, const Eigen::VectorXd& mass, const EigenOptions& opts) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || mass.size() != n) throw std::invalid_argument("lowest_eigenpairs: size mismatch");
  if (opts.n_eigs < 1) throw std::invalid_argument("lowest_eigenpairs: n_eigs must be positive");

  const Eigen::VectorXd dinv = mass.cwiseSqrt().cwiseInverse();
  SpMat<Scalar> C = dinv.asDiagonal() * A * dinv.asDiagonal();
  C.makeCompressed();

  const Eigen::Index m = std::min<Eigen::Index>(opts.krylov_dim, n);
  if (n <= std::max<Eigen::Index>(64, 2 * opts.n_eigs)) return dense_fallback(C, dinv, opts.n_eigs);

  SpMat<Scalar> K = C;
  SpMat<Scalar> eye(n, n);
  eye.setIdentity();
  Factor<Scalar> factor;
  double shift = opts.shift;
  for (int attempt = 0;; ++attempt) {
    K = C - Scalar(shift) * eye;
    factor.compute(K);
    if (factor.info() == Eigen::Success) break;
    if (attempt >= 4) throw NoConvergence("shift-invert factorization failed");
    shift = shift - 1.0 - std::abs(shift);
  }

  const int want = opts.n_eigs;
  const Eigen::Index keep = std::min<Eigen::Index>(want + 4, m - 2);
  Mat<Scalar> V(n, m);
  Mat<Scalar> H = Mat<Scalar>::Zero(m, m);
  std::mt19937_64 rng(0x5eed);

  Vec<Scalar> v = start_vector<Scalar>(n);
  v /= v.norm();
  V.col(0) = v;
  Eigen::Index ready = 0;  // first column of V whose projection is not yet in H

  EigenResult<Scalar> out;
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    Vec<Scalar> w;
    for (Eigen::Index j = ready; j < m; ++j) {
      w = factor.solve(Vec<Scalar>(V.col(j)));
      // Full projected column; rows above j are reused from previous columns.
      Vec<Scalar> h = V.leftCols(j + 1).adjoint() * w;
      for (Eigen::Index i = 0; i <= j; ++i) {
        H(i, j) = h[i];
        H(j, i) = Eigen::numext::conj(h[i]);
      }
      orthogonalize(V, j + 1, w);
      double beta = w.norm();
      if (j + 1 == m) break;
      if (beta < 1e-12) {
        w = random_vector<Scalar>(n, rng);
        orthogonalize(V, j + 1, w);
        beta = w.norm();
      }
      V.col(j + 1) = w / beta;
    }

    // Ritz pairs of the inverse operator: largest theta <-> smallest lambda.
    Mat<Scalar> Hs = (H + H.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(Hs);
    const Eigen::VectorXd theta = es.eigenvalues();
    const Mat<Scalar>& S = es.eigenvectors();

    out.values.resize(want);
    out.vectors.resize(n, want);
    // Ritz residual of the inverse operator, relative to theta:
    // ||Op y - theta y|| = ||f|| |s_last|.
    const double fnorm = w.norm();
    double worst = 0.0;
    for (int k = 0; k < want; ++k) {
      const Eigen::Index idx = m - 1 - k;
      worst = std::max(worst, fnorm * std::abs(S(m - 1, idx)) / theta[idx]);
      out.values[k] = shift + 1.0 / theta[idx];
      out.vectors.col(k) = V * S.col(idx);
    }
    out.residual = worst;
    out.restarts = restart;
    if (worst <= opts.residual_tol) {
      out.vectors = dinv.asDiagonal() * out.vectors;
      return out;
    }

    // Thick restart: keep the leading Ritz vectors, then continue from the
    // residual direction of the last Krylov step.
    Mat<Scalar> Vk = V * S.rightCols(keep);
    H.setZero();
    for (Eigen::Index i = 0; i < keep; ++i) {
      V.col(i) = Vk.col(i);
      H(i, i) = Scalar(theta[m - keep + i]);
    }
    Vec<Scalar> f = w;
    orthogonalize(V, keep, f);
    double beta = f.norm();
    if (beta < 1e-12) {
      f = random_vector<Scalar>(n, rng);
      orthogonalize(V, keep, f);
      beta = f.norm();
    }
    V.col(keep) = f / beta;
    ready = keep;
  }
  throw NoConvergence("Lanczos: residual " + std::to_string(out.residual) + " above tolerance");
}

template EigenResult<double> lowest_eigenpairs<double>(const SpMat<double>&, const Eigen::VectorXd&, const EigenOptions&);
template EigenResult<Complex> lowest_eigenpairs<Complex>(const SpMat<Complex>&, const Eigen::VectorXd&,
                                                         const EigenOptions&);

}  // namespace magcorner::linalg

#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>
#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "magcorner/sparse_eigen.hpp"
#include "magcorner/tridiagonal.hpp"

using namespace magcorner::linalg;

namespace {

SymTridiagonal dirichlet_laplacian(std::size_t n) {
  SymTridiagonal t;
  t.diag.assign(n, 2.0);
  t.off.assign(n - 1, -1.0);
  return t;
}

double laplacian_eigenvalue(std::size_t n, std::size_t k) {
  return 2.0 - 2.0 * std::cos(M_PI * static_cast<double>(k + 1) / static_cast<double>(n + 1));
}

}  // namespace

TEST_CASE("sturm count brackets the closed-form spectrum") {
  const auto t = dirichlet_laplacian(50);
  for (std::size_t k = 0; k < 50; k += 7) {
    const double ev = laplacian_eigenvalue(50, k);
    CHECK(sturm_count(t, ev - 1e-9) == k);
    CHECK(sturm_count(t, ev + 1e-9) == k + 1);
  }
}

TEST_CASE("bisection and inverse iteration") {
  const std::size_t n = 200;
  const auto t = dirichlet_laplacian(n);
  double lo, hi;
  gerschgorin(t, lo, hi);
  CHECK(lo <= 0.0);
  CHECK(hi >= 4.0);
  for (std::size_t k : {0u, 1u, 57u, 199u}) CHECK(bisect_eigenvalue(t, k, 1e-13) == doctest::Approx(laplacian_eigenvalue(n, k)).epsilon(1e-11));

  const double ev = bisect_eigenvalue(t, 0, 1e-14);
  const auto v = inverse_iteration(t, ev);
  // Ground mode sin(pi i / (n+1)), normalized.
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm += std::pow(std::sin(M_PI * (i + 1.0) / (n + 1.0)), 2);
  for (std::size_t i = 0; i < n; i += 40) CHECK(v[i] == doctest::Approx(std::sin(M_PI * (i + 1.0) / (n + 1.0)) / std::sqrt(norm)).epsilon(1e-8));
}

TEST_CASE("shift-invert Lanczos matches a dense solver on a Hermitian pencil") {
  const int n = 120;
  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  using C = std::complex<double>;
  Eigen::SparseMatrix<C> A(n, n);
  std::vector<Eigen::Triplet<C>> trip;
  Eigen::VectorXd mass(n);
  for (int i = 0; i < n; ++i) {
    mass[i] = 0.5 + std::abs(g(rng));
    trip.emplace_back(i, i, C(4.0 + std::abs(g(rng)), 0));
    if (i + 1 < n) {
      const C z(g(rng), g(rng));
      trip.emplace_back(i, i + 1, z);
      trip.emplace_back(i + 1, i, std::conj(z));
    }
    if (i + 7 < n) {
      const C z(0.3 * g(rng), 0.3 * g(rng));
      trip.emplace_back(i, i + 7, z);
      trip.emplace_back(i + 7, i, std::conj(z));
    }
  }
  A.setFromTriplets(trip.begin(), trip.end());

  EigenOptions opt;
  opt.n_eigs = 3;
  opt.shift = -10.0;
  const auto res = lowest_eigenpairs(A, mass, opt);

  // Dense oracle on the symmetric form M^{-1/2} A M^{-1/2}.
  const Eigen::VectorXd s = mass.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXcd D = s.asDiagonal() * Eigen::MatrixXcd(A) * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> dense(D);
  for (int k = 0; k < 3; ++k) CHECK(res.values[k] == doctest::Approx(dense.eigenvalues()[k]).epsilon(1e-9));
  CHECK(res.residual < 1e-7);
}

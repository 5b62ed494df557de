#pragma once

#include <cstddef>
#include <vector>

namespace magcorner::linalg {

// Real symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }
};

/// Number of eigenvalues strictly below x, from the signs of the LDL^T pivots
/// of T - x I (Sturm sequence count).
std::size_t sturm_count(const SymTridiagonal& t, double x);

/// Gerschgorin enclosure [lo, hi] of the spectrum.
void gerschgorin(const SymTridiagonal& t, double& lo, double& hi);

/// k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
/// Stops when the bracket is below abs_tol or cannot shrink further.
double bisect_eigenvalue(const SymTridiagonal& t, std::size_t k, double abs_tol = 0.0);

/// Unit eigenvector for an (accurate) eigenvalue estimate, by inverse
/// iteration with a tridiagonal LU solve. Sign fixed so the largest entry is
/// positive.
std::vector<double> inverse_iteration(const SymTridiagonal& t, double lambda, int iterations = 3);

}  // namespace magcorner::linalg

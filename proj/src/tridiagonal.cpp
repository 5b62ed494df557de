#include "magcorner/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace magcorner::linalg {

namespace {

double pivot_floor(const SymTridiagonal& t) {
  double emax = 1.0;
  for (double e : t.off) emax = std::max(emax, e * e);
  return std::numeric_limits<double>::min() * emax;
}

}  // namespace

std::size_t sturm_count(const SymTridiagonal& t, double x) {
  const std::size_t n = t.size();
  if (n == 0) return 0;
  const double pivmin = pivot_floor(t);
  std::size_t count = 0;
  double q = t.diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    q = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
  }
  return count;
}

void gerschgorin(const SymTridiagonal& t, double& lo, double& hi) {
  const std::size_t n = t.size();
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i + 1 < n) r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
}

double bisect_eigenvalue(const SymTridiagonal& t, std::size_t k, double abs_tol) {
  double lo = 0.0, hi = 0.0;
  gerschgorin(t, lo, hi);
  // The smallest eigenvalues of the discretized operators live far below
  // the Gerschgorin upper end; walk the upper end down first.
  double probe = lo + 1.0;
  while (probe < hi && sturm_count(t, probe) <= k) probe = lo + 2.0 * (probe - lo);
  hi = std::min(hi, probe);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= abs_tol) break;
    if (sturm_count(t, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> inverse_iteration(const SymTridiagonal& t, double lambda, int iterations) {
  const std::size_t n = t.size();
  std::vector<double> x(n, 1.0), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * static_cast<double>(i % 7);
  // Perturb the shift so T - shift stays invertible.
  const double shift = lambda - 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(lambda));
  std::vector<double> d(n);
  for (int it = 0; it < iterations; ++it) {
    // Thomas algorithm with partial safeguards against tiny pivots.
    d[0] = t.diag[0] - shift;
    y[0] = x[0];
    for (std::size_t i = 1; i < n; ++i) {
      if (d[i - 1] == 0.0) d[i - 1] = std::numeric_limits<double>::epsilon();
      const double m = t.off[i - 1] / d[i - 1];
      d[i] = t.diag[i] - shift - m * t.off[i - 1];
      y[i] = x[i] - m * y[i - 1];
    }
    if (d[n - 1] == 0.0) d[n - 1] = std::numeric_limits<double>::epsilon();
    x[n - 1] = y[n - 1] / d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (y[i] - t.off[i] * x[i + 1]) / d[i];
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : x) v /= norm;
  }
  const auto it = std::max_element(x.begin(), x.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*it < 0)
    for (double& v : x) v = -v;
  return x;
}

}  // namespace magcorner::linalg

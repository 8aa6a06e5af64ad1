#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "specshare/errors.hpp"

namespace specshare::linalg {

// Gaussian elimination with partial pivoting for the small dense systems the
// closed forms need (n <= 4 in practice). The condition estimate is the crude
// max|row sum| ratio of pivots; anything past kCondGuard is rejected rather
// than silently solved.
inline constexpr double kCondGuard = 1e12;

inline std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
  const std::size_t n = a.size();
  if (n == 0) return {};
  for (auto& row : a)
    if (row.size() != n) throw DomainError("solve_dense: matrix not square");
  if (b.size() != n) throw DomainError("solve_dense: rhs size mismatch");

  double max_pivot = 0.0, min_pivot = 0.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      std::swap(b[pivot], b[col]);
    }
    const double p = a[col][col];
    const double ap = std::abs(p);
    if (col == 0) {
      max_pivot = min_pivot = ap;
    } else {
      max_pivot = std::max(max_pivot, ap);
      min_pivot = std::min(min_pivot, ap);
    }
    if (ap == 0.0 || max_pivot / ap > kCondGuard || !std::isfinite(p))
      throw SingularSystemError("solve_dense: singular or ill-conditioned system");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / p;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// 2x2 special case used on hot paths (best responses).
// Solves [a11 a12; a21 a22] [x y]' = [b1 b2]'.
struct Solve2Result {
  double x, y;
};

inline Solve2Result solve2(double a11, double a12, double a21, double a22,
                           double b1, double b2) {
  const double det = a11 * a22 - a12 * a21;
  const double scale = std::max({std::abs(a11), std::abs(a12), std::abs(a21),
                                 std::abs(a22), 1e-300});
  if (!std::isfinite(det) || std::abs(det) < scale * scale / kCondGuard)
    throw SingularSystemError("solve2: singular or ill-conditioned system");
  return {(b1 * a22 - b2 * a12) / det, (a11 * b2 - a21 * b1) / det};
}

}  // namespace specshare::linalg

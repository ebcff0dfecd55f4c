#pragma once
// Resultant of two polynomials via the Sylvester matrix determinant with
// partially pivoted Gaussian elimination.

#include "qde/poly.hpp"

#include <cstddef>
#include <vector>

namespace qde {

// res(p, q). Throws if either leading coefficient vanishes, since the
// Sylvester construction is undefined for a deficient degree.
inline cplx sylvester_resultant(const PolyC& p, const PolyC& q) {
  const int m = p.degree();
  const int n = q.degree();
  if (m < 1 || n < 1) {
    throw Error("resultant undefined: a polynomial is constant");
  }
  if (std::abs(p[static_cast<std::size_t>(m)]) == 0 ||
      std::abs(q[static_cast<std::size_t>(n)]) == 0) {
    throw Error("resultant undefined: zero leading coefficient");
  }
  const int size = m + n;
  std::vector<std::vector<cplx>> a(static_cast<std::size_t>(size),
                                   std::vector<cplx>(
                                       static_cast<std::size_t>(size), cplx{}));
  // n shifted copies of p's coefficients (descending), then m copies of q's.
  for (int row = 0; row < n; ++row) {
    for (int k = 0; k <= m; ++k) {
      a[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + k)] =
          p[static_cast<std::size_t>(m - k)];
    }
  }
  for (int row = 0; row < m; ++row) {
    for (int k = 0; k <= n; ++k) {
      a[static_cast<std::size_t>(n + row)][static_cast<std::size_t>(row + k)] =
          q[static_cast<std::size_t>(n - k)];
    }
  }

  cplx det{1, 0};
  for (int col = 0; col < size; ++col) {
    int pivot = col;
    real best = std::abs(a[static_cast<std::size_t>(col)]
                          [static_cast<std::size_t>(col)]);
    for (int r = col + 1; r < size; ++r) {
      real mag = std::abs(a[static_cast<std::size_t>(r)]
                           [static_cast<std::size_t>(col)]);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (best == 0) return cplx{0, 0};
    if (pivot != col) {
      std::swap(a[static_cast<std::size_t>(pivot)],
                a[static_cast<std::size_t>(col)]);
      det = -det;
    }
    const cplx diag = a[static_cast<std::size_t>(col)]
                       [static_cast<std::size_t>(col)];
    det *= diag;
    for (int r = col + 1; r < size; ++r) {
      const cplx factor = a[static_cast<std::size_t>(r)]
                           [static_cast<std::size_t>(col)] / diag;
      if (factor == cplx{}) continue;
      for (int c = col; c < size; ++c) {
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            factor * a[static_cast<std::size_t>(col)]
                      [static_cast<std::size_t>(c)];
      }
    }
  }
  return det;
}

}  // namespace qde

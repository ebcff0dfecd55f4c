#pragma once
// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on the Legendre recurrence. Templated over the scalar so the moment
// pipeline can request nodes at its working precision.

#include "qde/scalars.hpp"

#include <vector>

namespace qde {

// Newton refinement from Chebyshev-like initial guesses. `pi_val` must carry
// the target precision; `tol` is the node convergence threshold.
template <class S>
void gauss_legendre(int n, const S& pi_val, const S& tol, std::vector<S>& x,
                    std::vector<S>& w) {
  using std::abs;
  using std::cos;
  x.assign(static_cast<std::size_t>(n), S(0));
  w.assign(static_cast<std::size_t>(n), S(0));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    S xi = cos(pi_val * (S(4 * i + 3) / S(4 * n + 2)));
    S dp(0);
    for (int iter = 0; iter < 200; ++iter) {
      S p0(1), p1 = xi;
      for (int k = 1; k < n; ++k) {
        S p2 = (S(2 * k + 1) * xi * p1 - S(k) * p0) / S(k + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = S(n) * (xi * p1 - p0) / (xi * xi - 1);
      S dx = p1 / dp;
      xi -= dx;
      if (abs(dx) <= tol) {
        // one final recurrence pass so dp matches the converged node
        S q0(1), q1 = xi;
        for (int k = 1; k < n; ++k) {
          S q2 = (S(2 * k + 1) * xi * q1 - S(k) * q0) / S(k + 1);
          q0 = q1;
          q1 = q2;
        }
        dp = S(n) * (xi * q1 - q0) / (xi * xi - 1);
        break;
      }
    }
    x[static_cast<std::size_t>(i)] = -xi;
    x[static_cast<std::size_t>(n - 1 - i)] = xi;
    S wi = 2 / ((1 - xi * xi) * dp * dp);
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
}

// Cached long double rules, sized for the tracer and geometry layers.
const std::vector<real>& gl_nodes(int n);
const std::vector<real>& gl_weights(int n);

}  // namespace qde

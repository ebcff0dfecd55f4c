#pragma once
// Polynomial root extraction (Aberth-Ehrlich with simultaneous updates) and
// a safeguarded scalar solver for bracketed real roots. Both are templated
// so the moment pipeline can run them at extended precision.

#include "qde/poly.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <vector>

namespace qde {

template <class C>
struct RootCluster {
  C center;
  int multiplicity;
};

namespace detail {

// Backward-error scale: |p(z)| below unit_roundoff * sum |a_j||z|^j means z
// is an exact root of a coefficient-wise nearby polynomial.
template <class C>
scalar_of_t<C> residual_scale(const Poly<C>& p, const C& z) {
  using S = scalar_of_t<C>;
  S zm = abs(z);
  S acc(0);
  S zp(1);
  for (int k = 0; k <= p.degree(); ++k) {
    acc += abs(p[static_cast<std::size_t>(k)]) * zp;
    zp *= zm;
  }
  return acc;
}

}  // namespace detail

// All roots of p, as a flat list (multiple roots appear as near-coincident
// entries; cluster afterwards). unit_roundoff sets the backward-error stop;
// throws on non-convergence with the worst residual in the message.
template <class C>
std::vector<C> aberth_roots(const Poly<C>& p,
                            const scalar_of_t<C>& unit_roundoff,
                            int max_iter = 400) {
  using S = scalar_of_t<C>;
  Poly<C> q = p.trimmed(S(0));
  int n = q.degree();
  if (n <= 0) return {};
  if (abs(q[static_cast<std::size_t>(n)]) == S(0)) {
    throw Error("root solve failed: zero leading coefficient");
  }
  if (n == 1) {
    return {-(q[0] / q[1])};
  }

  // Cauchy bound for the start circle, deterministic angular offset so no
  // start point sits on a symmetry axis of the polynomial.
  S bound(0);
  S lead = abs(q[static_cast<std::size_t>(n)]);
  for (int k = 0; k < n; ++k) {
    S r = abs(q[static_cast<std::size_t>(k)]) / lead;
    if (r > bound) bound = r;
  }
  bound += S(1);
  std::vector<C> z(static_cast<std::size_t>(n));
  const real two_pi = 2 * PI;
  for (int k = 0; k < n; ++k) {
    real ang = two_pi * (static_cast<real>(k) + 0.37L) / static_cast<real>(n) +
               0.5L;
    C dir{S(cosl(ang)), S(sinl(ang))};
    z[static_cast<std::size_t>(k)] = (S(0.85L) * bound) * dir;
  }

  std::vector<bool> settled(static_cast<std::size_t>(n), false);
  const S step_tol = 4 * unit_roundoff;
  const S res_tol = 16 * unit_roundoff;
  for (int iter = 0; iter < max_iter; ++iter) {
    bool all_done = true;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (settled[k]) continue;
      C pv, dv;
      q.eval2(z[k], pv, dv);
      if (abs(pv) <= res_tol * detail::residual_scale(q, z[k])) {
        settled[k] = true;
        continue;
      }
      C ratio = dv / pv;  // reciprocal of the Newton step
      C sum{S(0), S(0)};
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j == k) continue;
        sum += C(S(1), S(0)) / (z[k] - z[j]);
      }
      C w = C(S(1), S(0)) / (ratio - sum);
      z[k] = z[k] - w;
      if (abs(w) <= step_tol * (S(1) + abs(z[k]))) {
        settled[k] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) return z;
  }

  S worst(0);
  for (const C& zk : z) {
    S r = abs(q.eval(zk)) / detail::residual_scale(q, zk);
    if (r > worst) worst = r;
  }
  std::ostringstream msg;
  msg << "root solve did not converge after " << max_iter
      << " iterations; worst relative residual " << static_cast<double>(worst);
  throw Error(msg.str());
}

// Greedy clustering at the given radius; cluster center is the mean.
template <class C>
std::vector<RootCluster<C>> cluster_roots(const std::vector<C>& roots,
                                          const scalar_of_t<C>& radius) {
  using S = scalar_of_t<C>;
  std::vector<RootCluster<C>> out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    C acc = roots[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      if (abs(roots[j] - roots[i]) <= radius) {
        acc += roots[j];
        ++count;
        used[j] = true;
      }
    }
    out.push_back({acc / S(count), count});
  }
  return out;
}

// Roots of p with multiplicity estimates: Aberth pass, then clustering at
// radius 1e-7 * (1 + max |root|).
template <class C>
std::vector<RootCluster<C>> poly_roots(const Poly<C>& p,
                                       const scalar_of_t<C>& unit_roundoff) {
  using S = scalar_of_t<C>;
  std::vector<C> flat = aberth_roots(p, unit_roundoff);
  S biggest(0);
  for (const C& r : flat) {
    S m = abs(r);
    if (m > biggest) biggest = m;
  }
  return cluster_roots(flat, S(1e-7L) * (S(1) + biggest));
}

// Bracketed real root by bisection with Newton acceleration. Newton steps
// that leave the bracket are replaced by bisection, so convergence is
// guaranteed for any continuous sign change.
template <class F, class DF>
real real_root_in_interval(F f, DF df, real lo, real hi,
                           real tol = 1e-18L) {
  real flo = f(lo);
  real fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    std::ostringstream msg;
    msg << "bracket invalid: f(" << static_cast<double>(lo) << ") and f("
        << static_cast<double>(hi) << ") have the same sign";
    throw Error(msg.str());
  }
  real x = (lo + hi) / 2;
  for (int iter = 0; iter < 200; ++iter) {
    real fx = f(x);
    if (fx == 0) return x;
    if ((fx > 0) == (flo > 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    if (hi - lo <= tol * (1 + fabsl(x))) return (lo + hi) / 2;
    real d = df(x);
    real candidate = d != 0 ? x - fx / d : lo;
    if (candidate > lo && candidate < hi) {
      x = candidate;
    } else {
      x = (lo + hi) / 2;
    }
  }
  return (lo + hi) / 2;
}

}  // namespace qde

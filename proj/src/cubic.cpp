#include "qde/cubic.hpp"

#include "qde/roots.hpp"

#include <cmath>
#include <sstream>

namespace qde::cubic {

namespace {

// LHS of the scaled volume equation; vanishes exactly at v = a^-3 critical.
real volume_equation(real v) {
  real s = sqrtl(4 + 2 * v);
  return -3 * v * logl(2 * v) + 6 * v * logl(s + 2) + (2 - 2 * v) * s;
}

real volume_equation_deriv(real v) {
  real s = sqrtl(4 + 2 * v);
  return -3 * logl(2 * v) - 3 + 6 * logl(s + 2) + 6 * v / (s * (s + 2)) -
         2 * s + (2 - 2 * v) / s;
}

}  // namespace

real solve_b(real K) {
  auto f = [K](real b) {
    real b2 = b * b;
    real b4 = b2 * b2;
    return b4 * b2 - 2 * K * b4 - 8;
  };
  auto df = [K](real b) {
    real b2 = b * b;
    real b3 = b2 * b;
    return 6 * b3 * b2 - 8 * K * b3;
  };
  real hi = 2;
  while (f(hi) <= 0) hi *= 2;
  return real_root_in_interval(f, df, 0.0L, hi);
}

Params params_from_k(real K) {
  Params p;
  p.K = K;
  p.b = solve_b(K);
  p.a = 2 / (p.b * p.b);
  p.c = p.a;
  real b6 = powl(p.b, 6);
  p.C = -(b6 + 4) / powl(p.b, 8);
  return p;
}

QuadraticDifferential build_q(const Params& p) {
  std::vector<RootCluster<cplx>> zeros{
      {cplx{0, -p.a}, 2},
      {cplx{-p.b, p.c}, 1},
      {cplx{p.b, p.c}, 1},
  };
  return make_quad_diff_from_roots(cplx{-0.25L, 0}, zeros, 3);
}

real im_d_on_axis(real y, const Params& p) {
  real r = hypotl(y - p.a, p.b);
  return -r * r * r / (6 * PI) - p.a * (y - p.a) * r / (2 * PI) -
         logl(y - p.a + r) / PI + logl(p.b) / PI;
}

real im_d_at_double_zero(real a) {
  if (a <= 0) throw Error("domain error: a must be positive");
  real a32 = powl(a, 1.5L);
  real s = sqrtl(4 * a * a * a + 2);
  return ((2 * a32 - 2 / a32) * s + 6 * logl(2 * a32 + s) - 3 * logl(2.0L)) /
         (6 * PI);
}

const CriticalConstants& critical_constants() {
  static const CriticalConstants cc = [] {
    // Route one: the volume equation in v, then a = v^{-1/3}.
    real v1 = real_root_in_interval(volume_equation, volume_equation_deriv,
                                    0.5L, 10.0L);
    real a1 = powl(v1, -1.0L / 3.0L);

    // Route two: the axis level at the double zero changes sign at a*.
    auto g = [](real a) { return im_d_at_double_zero(a); };
    auto dg = [](real a) {
      real h = 1e-7L;
      return (im_d_at_double_zero(a + h) - im_d_at_double_zero(a - h)) /
             (2 * h);
    };
    real a2 = real_root_in_interval(g, dg, 0.2L, 2.0L);

    if (fabsl(a1 - a2) > 1e-8L) {
      std::ostringstream msg;
      msg << "critical constants cross-check failed: the two routes give a = "
          << static_cast<double>(a1) << " and " << static_cast<double>(a2);
      throw Error(msg.str());
    }

    CriticalConstants cc;
    cc.a_star = a2;
    cc.v_star = 1 / (a2 * a2 * a2);
    cc.b_star = sqrtl(2 / a2);
    cc.k_star = 1 / a2 - a2 * a2;
    return cc;
  }();
  return cc;
}

Phase classify_phase(real K, real tie_tol) {
  if (!(tie_tol > 0)) throw Error("phase tie tolerance must be positive");
  real k_star = critical_constants().k_star;
  if (fabsl(K - k_star) <= tie_tol) return Phase::Critical;
  return K < k_star ? Phase::OneCut : Phase::TwoCut;
}

Phase classify_phase(real K) { return classify_phase(K, 1e-9L); }

std::pair<real, real> find_y1_y2(const Params& p) {
  real peak = im_d_at_double_zero(p.a);
  if (peak <= 0) {
    throw Error("no real roots: the axis level has no sign change here");
  }
  auto f = [&p](real y) { return im_d_on_axis(y, p); };
  auto df = [&p](real y) {
    return -(y + p.a) * hypotl(y - p.a, p.b) / (2 * PI);
  };
  // The level increases up to y = -a and decreases after it, so one root
  // sits on each side. Expand outward until the sign flips.
  real step = 1;
  real hi = -p.a + step;
  while (f(hi) >= 0) {
    step *= 2;
    hi = -p.a + step;
  }
  real y1 = real_root_in_interval(f, df, -p.a, hi);
  step = 1;
  real lo = -p.a - step;
  while (f(lo) >= 0) {
    step *= 2;
    lo = -p.a - step;
  }
  real y2 = real_root_in_interval(f, df, lo, -p.a);
  return {y1, y2};
}

real im_d_on_segment(const Params& p, real x) {
  if (fabsl(x) >= p.b) {
    throw Error("domain error: the segment requires |x| < b");
  }
  real t = p.b * p.b - x * x;
  return -t * sqrtl(t) / (6 * PI);
}

}  // namespace qde::cubic

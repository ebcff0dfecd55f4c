#include "qde/quintic.hpp"

#include "qde/gl.hpp"
#include "qde/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qde::quintic {

namespace {

constexpr real kRootUnit = 5.42101086242752217e-20L;

// sign convention shared by both phases: +1 selects phase 1, -1 phase 2
real phase_sign(int phase) {
  if (phase != 1 && phase != 2) {
    std::ostringstream msg;
    msg << "phase must be 1 or 2, got " << phase;
    throw Error(msg.str());
  }
  return phase == 1 ? 1.0L : -1.0L;
}

// Back-substitution for the squared half-width and the squared separation
// once (a, c) are known. Both denominators carry 3c - a, which is nonzero
// on both parameter branches.
real chord_half_width_sq(real a, real c) {
  return 2 * (c - a) * (a * a + c * c) / (3 * c - a);
}

real pair_split_sq(real a, real c) {
  return (7 * a * a * c - 5 * a * c * c + a * a * a + 5 * c * c * c) /
         (4 * (3 * c - a));
}

real dectic(real c) {
  real c5 = powl(c, 5);
  return 28 * c5 * c5 + 108 * c5 - 3;
}

// beta in Re T = x^3 - beta x, from the factored form of T.
real factor_cubic_coeff(const Params& p) {
  real u = p.c + p.a;
  real v = p.c - p.e;
  return v * v + p.d * p.d + 2 * u * v;
}

// gamma in Im T = 4 c x^2 + gamma.
real factor_quad_const(const Params& p) {
  real v = p.c - p.e;
  return -(p.a + p.c) * (v * v + p.d * p.d);
}

void validate(const Params& p) {
  if (!(p.b > 0) || !(p.d > 0)) {
    throw Error("parameter validation: zero offsets must be positive");
  }
  std::ostringstream msg;
  if (fabsl(p.e - (p.a - p.c) / 2) > 1e-12L) {
    msg << "parameter validation: e deviates from (a - c)/2 by "
        << static_cast<double>(p.e - (p.a - p.c) / 2);
    throw Error(msg.str());
  }
  real b_gap = p.b * p.b - chord_half_width_sq(p.a, p.c);
  real d_gap = p.d * p.d - pair_split_sq(p.a, p.c);
  if (fabsl(b_gap) > 1e-10L || fabsl(d_gap) > 1e-10L) {
    msg << "parameter validation: back-substitution residuals "
        << static_cast<double>(b_gap) << ", " << static_cast<double>(d_gap);
    throw Error(msg.str());
  }
  if (fabsl(dectic(p.c)) > 1e-10L) {
    msg << "parameter validation: c misses its dectic by "
        << static_cast<double>(dectic(p.c));
    throw Error(msg.str());
  }
  for (real r : coefficient_system_residuals(p)) {
    if (fabsl(r) > 1e-10L) {
      msg << "parameter validation: coefficient system residual "
          << static_cast<double>(r);
      throw Error(msg.str());
    }
  }
}

}  // namespace

Params closed_form_params(int phase) {
  real sgn = phase_sign(phase);
  real rt30 = sqrtl(30.0L);
  Params p;
  p.phase = phase;
  p.c = sgn * powl((5 * rt30 - sgn * 27) / 14, 0.2L);
  p.cube_radical =
      cbrtl(sgn * 12 * rt30 + 62 + sqrtl(sgn * 1410 * rt30 + 7740));
  p.fifth_radical = powl(192080 * rt30 - sgn * 1037232.0L, 0.2L);
  real k = 4 + sgn * rt30;
  real w = -p.cube_radical - k / p.cube_radical;
  p.a = (w + 1) * p.c / 3;
  p.e = (w - 2) * p.c / 6;
  p.b = sqrtl(36 + sgn * 6 * rt30) * p.fifth_radical / 42;
  p.d = sqrtl(pair_split_sq(p.a, p.c));
  validate(p);
  return p;
}

Params solve_params_numeric(int phase) {
  real sgn = phase_sign(phase);
  auto df = [](real c) {
    real c4 = powl(c, 4);
    return 280 * c4 * c4 * c + 540 * c4;
  };
  real c = phase == 1 ? real_root_in_interval(dectic, df, 0.0L, 1.0L)
                      : real_root_in_interval(dectic, df, -2.0L, -1.0L);

  // The dectic splits over sqrt(30); a is the single real root of the
  // matching cubic cofactor.
  real rt30 = sqrtl(30.0L);
  PolyC cofactor(std::vector<cplx>{cplx{(15 + sgn * 3 * rt30) * c * c * c, 0},
                                   cplx{-(3 + sgn * rt30) * c * c, 0},
                                   cplx{-3 * c, 0}, cplx{3, 0}});
  auto clusters = poly_roots(cofactor, kRootUnit);
  real a = 0;
  int real_count = 0;
  for (const auto& cl : clusters) {
    if (fabsl(cl.center.imag()) <= 1e-9L * (1 + std::abs(cl.center))) {
      a = cl.center.real();
      real_count += cl.multiplicity;
    }
  }
  if (real_count != 1) {
    std::ostringstream msg;
    msg << "expected exactly one real root of the cubic cofactor, found "
        << real_count << "; roots:";
    for (const auto& cl : clusters) {
      msg << " " << static_cast<double>(cl.center.real()) << "+"
          << static_cast<double>(cl.center.imag()) << "i";
    }
    throw Error(msg.str());
  }

  real b_sq = chord_half_width_sq(a, c);
  real d_sq = pair_split_sq(a, c);
  if (b_sq <= 0 || d_sq <= 0) {
    std::ostringstream msg;
    msg << "back-substitution produced nonpositive squares " <<
        static_cast<double>(b_sq) << ", " << static_cast<double>(d_sq);
    throw Error(msg.str());
  }

  Params p;
  p.phase = phase;
  p.a = a;
  p.b = sqrtl(b_sq);
  p.c = c;
  p.d = sqrtl(d_sq);
  p.e = (a - c) / 2;
  p.cube_radical =
      cbrtl(sgn * 12 * rt30 + 62 + sqrtl(sgn * 1410 * rt30 + 7740));
  p.fifth_radical = powl(192080 * rt30 - sgn * 1037232.0L, 0.2L);
  validate(p);

  Params closed = closed_form_params(phase);
  real gap = fabsl(p.a - closed.a);
  gap = fmaxl(gap, fabsl(p.b - closed.b));
  gap = fmaxl(gap, fabsl(p.c - closed.c));
  gap = fmaxl(gap, fabsl(p.d - closed.d));
  gap = fmaxl(gap, fabsl(p.e - closed.e));
  if (gap > 1e-9L) {
    std::ostringstream msg;
    msg << "numeric parameters disagree with the closed forms by "
        << static_cast<double>(gap);
    throw Error(msg.str());
  }
  return p;
}

std::array<real, 4> coefficient_system_residuals(const Params& p) {
  real a = p.a, b = p.b, c = p.c, d = p.d;
  real a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a;
  real b2 = b * b;
  real c2 = c * c, c3 = c2 * c, c4 = c3 * c, c5 = c4 * c;
  real d2 = d * d, d4 = d2 * d2;
  real r1 = -3 * a2 + 2 * a * c + 2 * b2 - 3 * c2 + 4 * d2;
  real r2 = -a * c2 + a2 * c + 4 * b2 * c + 4 * a * d2 - 4 * c * d2 + a3 - c3;
  real r3 = -16 * a * b2 * c + 16 * a * c * d2 - 38 * a2 * c2 + 20 * a3 * c +
            24 * a2 * b2 + 20 * a * c3 + 24 * a2 * d2 - 9 * a4 - 9 * c4 -
            16 * d4 - 32 * b2 * d2 - 24 * b2 * c2 + 24 * c2 * d2;
  real r4 = -32 + 2 * a2 * c3 + 3 * a5 + 20 * a2 * b2 * c - 24 * a2 * c * d2 +
            a4 * c - 16 * b2 * c * d2 + 8 * a3 * d2 + 16 * c * d4 - 3 * c5 -
            8 * c3 * d2 - 4 * a3 * b2 - 16 * a * d4 - a * c4 - 4 * b2 * c3 -
            2 * a3 * c2 - 12 * a * b2 * c2 + 24 * a * c2 * d2 -
            16 * a * b2 * d2;
  return {r1, r2, r3, r4};
}

std::array<real, 2> reduced_system_residuals(const Params& p) {
  real a = p.a, c = p.c;
  real a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a, a6 = a5 * a;
  real c2 = c * c, c3 = c2 * c, c4 = c3 * c, c5 = c4 * c, c6 = c5 * c;
  real c7 = c6 * c;
  real t1 = -15 * c6 + 3 * a6 + 36 * a3 * c3 - 3 * a4 * c2 - 6 * a5 * c -
            37 * a2 * c4 + 30 * a * c5;
  real t2 = -9 * c2 + 6 * a * c - a2 + 3 * a6 * c - 3 * c7 + 2 * a * c6 +
            7 * a4 * c3 - 6 * a5 * c2 - 4 * a3 * c4 + a2 * c5;
  return {t1, t2};
}

void reject_real_axis_pair() {
  // With c = 0 the low-order parts of the eliminated system are 3 a^6 and
  // -a^2, so a = 0; the first coefficient equation is then 2 b^2 + 4 d^2,
  // so b = d = 0 over the reals. The last equation keeps its constant term.
  Params probe;
  probe.phase = 0;
  probe.a = probe.b = probe.c = probe.d = probe.e = 0;
  real leftover = coefficient_system_residuals(probe)[3];
  std::ostringstream msg;
  msg << "configuration with the simple zeros on the real axis is "
         "inconsistent: with c = 0 the system forces a = b = d = 0 and "
         "leaves a constant residual of "
      << static_cast<double>(leftover);
  throw Error(msg.str());
}

QuadraticDifferential build_q(const Params& p) {
  std::vector<RootCluster<cplx>> zeros{{p.axis_zero(), 2},
                                       {p.pair_left(), 1},
                                       {p.pair_right(), 1},
                                       {p.double_left(), 2},
                                       {p.double_right(), 2}};
  return make_quad_diff_from_roots(cplx{-0.25L, 0}, zeros, 5);
}

cplx chord_factor(const Params& p, real x) {
  cplx linear{x, p.c + p.a};
  cplx shifted{x, p.c - p.e};
  return linear * (shifted * shifted - p.d * p.d);
}

real chord_level_integral(const Params& p, real x) {
  if (!(x >= -p.b && x <= p.b)) {
    throw Error("domain error: the chord requires |x| <= half-width");
  }
  // The weighted integrand is odd, so the running integral is even in x;
  // fold onto the left half where s = -b + t^2 grades out the square root
  // and keeps the interval clear of the branch point at t^2 = 2b.
  real xl = -fabsl(x);
  real beta = factor_cubic_coeff(p);
  real tmax = sqrtl(xl + p.b);
  const auto& nodes = gl_nodes(32);
  const auto& weights = gl_weights(32);
  real acc = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    real t = tmax * (nodes[i] + 1) / 2;
    real s = -p.b + t * t;
    acc += weights[i] * t * t * sqrtl(2 * p.b - t * t) *
           (s * s * s - beta * s) * tmax;
  }
  return acc;
}

cplx d_prime_on_half_line(const Params& p, real x) {
  if (x > -p.b) {
    throw Error("domain error: the half-line requires x <= -half-width");
  }
  real w = sqrtl(x * x - p.b * p.b);
  return w * chord_factor(p, x) / (2 * PI);
}

TriangleReport triangle_guards(const Params& p) {
  TriangleReport rep;
  rep.phase = p.phase;
  QuadraticDifferential qd = build_q(p);

  auto departures = emanation_angles(qd, 1, Orientation::Horizontal);
  if (departures.size() != 3) {
    throw Error("the left simple zero must emit three horizontal arcs");
  }
  std::copy(departures.begin(), departures.end(), rep.departures.begin());
  real lo = p.phase == 1 ? -PI / 4 : 0;
  real hi = p.phase == 1 ? 0 : PI / 4;
  for (int i = 0; i < 3; ++i) {
    if (rep.departures[i] > lo && rep.departures[i] < hi) {
      if (rep.entering_index >= 0) {
        throw Error("more than one departure direction enters the triangle");
      }
      rep.entering_index = i;
    }
  }
  if (rep.entering_index < 0) {
    throw Error("no departure direction enters the triangle");
  }

  rep.factor_cubic_coeff = factor_cubic_coeff(p);
  rep.chord_integral_mid = chord_level_integral(p, 0);
  // Branch along the chord fixed so the level is positive on the open
  // segment; the raw integral keeps its sign for reference.
  real sigma = rep.chord_integral_mid < 0 ? -1 : 1;
  rep.im_d_mid = sigma * rep.chord_integral_mid / (2 * PI);
  rep.im_d_min = std::numeric_limits<real>::infinity();
  rep.chord_single_signed = true;
  for (int i = 1; i < 2000; ++i) {
    real x = -p.b + 2 * p.b * i / 2000;
    real level = sigma * chord_level_integral(p, x) / (2 * PI);
    rep.im_d_min = fminl(rep.im_d_min, level);
    if (level <= 0) rep.chord_single_signed = false;
  }

  // Tilted side leaving z1 at slope -+1 toward the imaginary axis, as a
  // polynomial in the horizontal coordinate x in (-b, 0).
  cplx slope = p.phase == 1 ? cplx{1, -1} : cplx{1, 1};
  rep.tilted_dir = slope / std::abs(slope);
  rep.apex = cplx{0, p.phase == 1 ? p.c - p.b : p.c + p.b};
  PolyC composed = compose_affine(qd.q, slope, rep.apex);
  std::vector<cplx> re_coeffs;
  re_coeffs.reserve(composed.coeffs().size());
  for (const cplx& v : composed.coeffs()) re_coeffs.push_back({v.real(), 0});
  rep.tilted_re_q = PolyC(std::move(re_coeffs));
  for (const auto& cl : poly_roots(rep.tilted_re_q, kRootUnit)) {
    for (int m = 0; m < cl.multiplicity; ++m) {
      rep.tilted_re_q_roots.push_back(cl.center);
    }
  }
  std::sort(rep.tilted_re_q_roots.begin(), rep.tilted_re_q_roots.end(),
            [](const cplx& l, const cplx& r) {
              return l.real() != r.real() ? l.real() < r.real()
                                          : l.imag() < r.imag();
            });
  rep.tilted_re_q_max = -std::numeric_limits<real>::infinity();
  for (int i = 1; i < 2000; ++i) {
    real x = -p.b + p.b * i / 2000;
    rep.tilted_re_q_max =
        fmaxl(rep.tilted_re_q_max, rep.tilted_re_q.eval(cplx{x, 0}).real());
  }
  rep.tilted_re_q_negative = rep.tilted_re_q_max < 0;
  return rep;
}

HalfLineReport half_line_guards(const Params& p) {
  HalfLineReport rep;
  rep.phase = p.phase;
  rep.factor_cubic_coeff = factor_cubic_coeff(p);
  rep.factor_quad_lead = 4 * p.c;
  rep.factor_quad_const = factor_quad_const(p);

  rep.im_positive = true;
  rep.re_negative = true;
  const real left = -50;
  for (int i = 1; i < 2000; ++i) {
    real x = left + (-p.b - left) * i / 2000;
    cplx dp = d_prime_on_half_line(p, x);
    if (!(dp.imag() > 0)) rep.im_positive = false;
    if (!(dp.real() < 0)) rep.re_negative = false;
  }

  const real nan = std::numeric_limits<real>::quiet_NaN();
  rep.im_flip = nan;
  real ratio = -rep.factor_quad_const / rep.factor_quad_lead;
  if (ratio > 0 && sqrtl(ratio) > p.b) rep.im_flip = -sqrtl(ratio);
  rep.re_flip = nan;
  if (rep.factor_cubic_coeff > p.b * p.b) {
    rep.re_flip = -sqrtl(rep.factor_cubic_coeff);
  }
  rep.blocks_crossing = rep.im_positive && rep.re_negative;
  return rep;
}

DirectionTable direction_table(int degree) {
  if (degree < 1) throw Error("direction table needs a positive degree");
  DirectionTable table;
  table.degree = degree;
  for (int j = 0; j < 2 * degree; ++j) {
    real h = j * PI / degree;
    if (j > degree) h -= 2 * PI;
    real v = (2 * j + 1) * PI / (2 * degree);
    if (2 * j + 1 > 2 * degree) v -= 2 * PI;
    table.horizontal.push_back(h);
    table.vertical.push_back(v);
  }
  return table;
}

}  // namespace qde::quintic

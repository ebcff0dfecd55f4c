#pragma once
// The quintic family V(z) = -i z^5 / 5. Two admissible parameter branches
// ("phases") place the support arc above or below the real axis; both share
// the same zero layout for the spectral polynomial:
//   Q(z) = -1/4 (z - z1)(z - z2)(z - z0)^2 (z - z3)^2 (z - z4)^2,
//   z0 = -a i, z1 = -b + c i, z2 = b + c i, z3 = -d + e i, z4 = d + e i.
// The module solves the coefficient system for (a, b, c, d, e) twice (nested
// radicals and a bracketed numeric root), builds Q, and packages the two
// geometric guards used by the global trajectory analysis: the triangle trap
// that confines the arc between the simple zeros, and the sign pattern of D'
// on the horizontal half-line continuing the chord to the left.

#include "qde/poly.hpp"
#include "qde/qdiff.hpp"
#include "qde/scalars.hpp"

#include <array>
#include <vector>

namespace qde::quintic {

struct Params {
  int phase = 0;  // 1: arc above the real axis, 2: below
  real a = 0;     // depth of the double zero on the imaginary axis
  real b = 0;     // half-width of the support chord
  real c = 0;     // height of the simple zeros
  real d = 0;     // half-separation of the off-axis double zeros
  real e = 0;     // height of the off-axis double zeros, (a - c) / 2
  real cube_radical = 0;   // nested cube root entering a and e
  real fifth_radical = 0;  // nested fifth root entering b

  cplx axis_zero() const { return {0, -a}; }    // double
  cplx pair_left() const { return {-b, c}; }    // simple
  cplx pair_right() const { return {b, c}; }    // simple
  cplx double_left() const { return {-d, e}; }  // double
  cplx double_right() const { return {d, e}; }  // double
};

// Parameters in closed form: c is a fifth root, a and e come from a nested
// cube root, b from a nested fifth root, d by back-substitution. Throws for
// phases other than 1 and 2.
Params closed_form_params(int phase);

// The same parameters recomputed without the radicals: c as the bracketed
// real root of 28 c^10 + 108 c^5 - 3, a as the unique real root of the cubic
// factor the dectic splits into, b and d by back-substitution, e = (a - c)/2.
// Cross-checked against the closed forms to 1e-9.
Params solve_params_numeric(int phase);

// Residuals of the four-equation coefficient system at (a, b, c, d).
std::array<real, 4> coefficient_system_residuals(const Params& p);

// Residuals of the eliminated two-polynomial system at (a, c).
std::array<real, 2> reduced_system_residuals(const Params& p);

// Probes the configuration with the simple zeros on the real axis (c = 0):
// the eliminated system then forces a = 0, the first coefficient equation
// forces b = d = 0, and the last one is left with a nonzero constant. Always
// throws; the message carries the leftover value.
[[noreturn]] void reject_real_axis_pair();

// Q as a quadratic differential with the zero structure attached (d = 5).
QuadraticDifferential build_q(const Params& p);

// The cubic factor T with Q = 1/4 (b^2 - x^2) T(x)^2 along the horizontal
// line through the simple zeros (z = x + i c):
//   T(x) = (x + i(c + a)) ((x + i(c - e))^2 - d^2)
//        = x^3 - beta x + i (4 c x^2 + gamma).
cplx chord_factor(const Params& p, real x);

// Running weighted integral of the real part of T along the chord,
//   int_{-b}^{x} sqrt(b^2 - s^2) (s^3 - beta s) ds,
// for |x| <= b. Even in x because the integrand is odd; evaluated on the
// left half so the endpoint grading stays clear of the far branch point.
real chord_level_integral(const Params& p, real x);

// D'(x) on the half-line z = x + i c, x <= -b, continuing the chord left of
// the left simple zero:
//   D'(x) = sqrt(x^2 - b^2) T(x) / (2 pi).
// Throws a domain error for x > -b; exactly zero at x = -b.
cplx d_prime_on_half_line(const Params& p, real x);

// Everything the triangle trap needs. The triangle hangs from the chord
// between the simple zeros (phase 1) or rises above it (phase 2); its tilted
// sides leave the simple zeros at slope -+1 and meet on the imaginary axis.
struct TriangleReport {
  int phase = 0;
  std::array<real, 3> departures{};  // horizontal departure angles at z1
  int entering_index = -1;  // the unique departure pointing into the triangle
  real factor_cubic_coeff = 0;   // beta in Re T = x^3 - beta x
  real chord_integral_mid = 0;   // raw level integral at the chord midpoint
  real im_d_mid = 0;             // midpoint level, branch fixed positive
  real im_d_min = 0;             // sampled minimum of the level on the open chord
  bool chord_single_signed = false;
  cplx tilted_dir;               // unit tangent of the tilted side leaving z1
  cplx apex;                     // where the tilted sides meet
  PolyC tilted_re_q;             // Re Q along the tilted side, in the side parameter
  std::vector<cplx> tilted_re_q_roots;  // its roots, sorted by (re, im)
  real tilted_re_q_max = 0;      // sampled maximum on the open side
  bool tilted_re_q_negative = false;
};

// Departure directions at the left simple zero, the level of Im D along the
// open chord (nonvanishing, so the chord level separates the triangle), and
// the sign of Re Q on the tilted sides (negative, so no horizontal arc can
// leave through them).
TriangleReport triangle_guards(const Params& p);

// Sign pattern of D' on the half-line. When Im D' and Re D' are single
// signed there (phase 1), no level curve of Im D leaving the left simple
// zero can cross the half-line.
struct HalfLineReport {
  int phase = 0;
  real factor_cubic_coeff = 0;  // beta in Re T = x (x^2 - beta)
  real factor_quad_lead = 0;    // 4c in Im T = 4 c x^2 + gamma
  real factor_quad_const = 0;   // gamma
  bool im_positive = false;     // Im D' > 0 at every sample
  bool re_negative = false;     // Re D' < 0 at every sample
  real im_flip = 0;             // sign change of Im D', NaN when single signed
  real re_flip = 0;             // sign change of Re D', NaN when single signed
  bool blocks_crossing = false;
};

HalfLineReport half_line_guards(const Params& p);

// Closed-form admissible directions at infinity for a differential with
// real negative leading coefficient and sector parameter `degree`:
// horizontal j pi / degree, vertical offset by pi / (2 degree), j-ordered,
// each wrapped to (-pi, pi].
struct DirectionTable {
  int degree = 0;
  std::vector<real> horizontal;
  std::vector<real> vertical;
};

DirectionTable direction_table(int degree);

}  // namespace qde::quintic

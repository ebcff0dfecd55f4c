#pragma once
// The one-parameter cubic family V(z) = -i z^3/3 + i K z. Everything the
// phase diagram needs: the spectral parameters as functions of K, the
// quadratic differential, the axis level function whose sign separates the
// one-cut and three-cut phases, and the critical constants.

#include "qde/qdiff.hpp"
#include "qde/scalars.hpp"

#include <utility>

namespace qde::cubic {

// Zeros of the spectral polynomial:
//   Q(z) = -1/4 (z - z1)(z - z2)(z - z0)^2,
//   z0 = -a i (double), z1 = -b + c i, z2 = b + c i, with a = c = 2/b^2.
struct Params {
  real K;
  real b;  // half-width of the support arc
  real a;  // depth of the double zero below the real axis
  real c;  // height of the simple zeros, equals a in this family
  real C;  // constant coefficient of Q
};

// Unique positive solution of b^6 - 2 K b^4 - 8 = 0.
real solve_b(real K);

Params params_from_k(real K);

// Q as a quadratic differential with the zero structure attached (d = 3).
QuadraticDifferential build_q(const Params& p);

struct CriticalConstants {
  real v_star;  // critical value of v = a^-3
  real a_star;
  real b_star;
  real k_star;
};

// Computed once by two algebraically independent routes (the scaled volume
// equation in v, and the vanishing of the axis level at the double zero).
// Throws if the routes disagree beyond 1e-8.
const CriticalConstants& critical_constants();

// Im D(i y) relative to the support arc, in closed form:
//   -(1/6 pi) r^3 - (a/2 pi)(y - a) r - (1/pi) log(y - a + r) + (1/pi) log b
// with r = sqrt((y - a)^2 + b^2).
real im_d_on_axis(real y, const Params& p);

// The same level evaluated at the double zero y = -a, as a function of a
// alone (b = sqrt(2/a) eliminated). Positive exactly in the one-cut phase.
// Strictly increasing in a; throws a domain error for a <= 0.
real im_d_at_double_zero(real a);

enum class Phase { OneCut, Critical, TwoCut };

// Phase by comparing K against the critical value. The tie band around K*
// defaults to 1e-9 but widens to whatever tolerance the caller works at.
Phase classify_phase(real K, real tie_tol);
Phase classify_phase(real K);

// The two real solutions y1 > -a > y2 of im_d_on_axis(y) = 0. They exist
// only in the one-cut phase; otherwise throws "no real roots".
std::pair<real, real> find_y1_y2(const Params& p);

// Im D(x + i a) relative to the arc, for |x| < b:
//   -(b^2 - x^2)^{3/2} / (6 pi).
// Throws a domain error outside the open interval.
real im_d_on_segment(const Params& p, real x);

}  // namespace qde::cubic

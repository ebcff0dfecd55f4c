#pragma once
// Polynomial quadratic differentials Q(z) dz^2 and the objects built on
// them: critical trajectories, the primitive D(z) = (1/pi i) int sqrt(Q),
// trajectory polygons, and the index bookkeeping at infinity.
//
// Conventions used throughout:
//  * "Horizontal" trajectories are the level sets of Im D, the curves with
//    sqrt(Q) dz purely imaginary; the support of the equilibrium measure is
//    made of these. "Vertical" means level sets of Re D.
//  * A trajectory traced from a zero starts along one of the m+2 emanation
//    directions of that zero (multiplicity m).

#include "qde/poly.hpp"
#include "qde/roots.hpp"
#include "qde/scalars.hpp"

#include <string>
#include <vector>

namespace qde {

enum class Orientation { Horizontal, Vertical };

struct QuadraticDifferential {
  PolyC q;                               // ascending coefficients
  std::vector<RootCluster<cplx>> zeros;  // clustered roots of q
  int d = 0;                             // sector parameter, deg q = 2d - 2

  cplx eval(cplx z) const { return q.eval(z); }

  // characteristic length: 1 + the largest zero modulus
  real scale() const;

  // distance from z to the nearest zero; index receives which one
  real nearest_zero(cplx z, int* index = nullptr) const;
};

// Builds the differential and extracts the zero clusters. d must satisfy
// deg q = 2d - 2.
QuadraticDifferential make_quad_diff(PolyC q, int d);

// Same, but with the factorization already known:
// q = leading * prod (z - root_i)^{mult_i}.
QuadraticDifferential make_quad_diff_from_roots(
    cplx leading, const std::vector<RootCluster<cplx>>& zeros, int d);

// The m+2 directions in (-pi, pi] along which trajectories of the given
// orientation leave zero #index (multiplicity m), sorted ascending.
std::vector<real> emanation_angles(const QuadraticDifferential& qd,
                                   int zero_index, Orientation orientation);

// Admissible asymptotic directions at infinity for the orientation, the 2d
// solutions of arg(lead) / 2 + d * theta = pi/2 (mod pi), sorted in (-pi, pi].
std::vector<real> infinity_directions(const QuadraticDifferential& qd,
                                      Orientation orientation);

// Square root continuous against a reference value: the branch of sqrt(v)
// closer to ref. safety (if given) receives the normalized alignment
// |cos| of the chosen branch against ref; near 0 the branch is ambiguous.
cplx sqrt_against(cplx v, cplx ref, real* safety = nullptr);

// D(end) - D(start) along the polyline, with the square root branch fixed
// to branch_sign * principal sqrt at the first point and continued along
// the path. Throws "branch ambiguity" if the path runs through a zero.
cplx D_value(const QuadraticDifferential& qd, const std::vector<cplx>& path,
             int branch_sign);

// int sqrt(Q) dz over the chord [a, b], adaptively refined until the local
// error is below tol_rate * |b - a|. The branch is continued from ref,
// which receives the continued value at b.
cplx integrate_sqrt_q(const QuadraticDifferential& qd, cplx a, cplx b,
                      cplx& ref, real tol_rate);

struct Endpoint {
  enum class Kind { ZeroHit, InfinityDirection, Truncated };
  Kind kind = Kind::Truncated;
  int index = -1;      // zero index, or slot in infinity_directions()
  real angle = 0;      // snapped admissible direction
  real deviation = 0;  // |measured - snapped| in radians
  real distance = 0;   // final distance to the zero at capture
  std::string reason;  // truncation cause
};

struct Trajectory {
  std::vector<cplx> points;  // starts at the seed zero / start point
  std::vector<real> arclen;  // cumulative polyline length, arclen[0] = 0
  std::vector<cplx> dvals;   // D relative to the start, per point
  Endpoint end;
  cplx branch_seed{0, 0};    // continued sqrt(Q) at points[1]
  real level = 0;            // the Im D value the curve follows
  real max_drift = 0;        // worst |Im D - level| observed
  real emanation = 0;        // departure direction
  int start_zero = -1;       // -1 when started from a free point
  Orientation orientation = Orientation::Horizontal;

  real length() const { return arclen.empty() ? 0 : arclen.back(); }
};

struct TraceOptions {
  real angle_step = 2.5e-3L;        // max tangent turn per step (radians)
  real step_factor = 2.5e-3L;       // base step as a fraction of scale
  real capture_factor = 1e-5L;      // capture radius factor
  real seed_offset_factor = 1e-4L;  // zero seed offset factor
  real escape_factor = 10;          // escape radius factor
  long max_steps = 1000000;         // step budget
  int direction = +1;               // +1/-1: which way from a free start
  int branch_sign = +1;             // sqrt branch at a free start
};

// Level curve of the orientation through `start` (not a zero of Q).
Trajectory trace(const QuadraticDifferential& qd, cplx start,
                 Orientation orientation, const TraceOptions& opts = {});

// Critical trajectory leaving zero #zero_index along emanation direction
// #which (index into emanation_angles()).
Trajectory trace_from_zero(const QuadraticDifferential& qd, int zero_index,
                           int which, Orientation orientation,
                           const TraceOptions& opts = {});

struct ConnectionResult {
  bool found = false;
  int emanation_index = -1;  // which departure direction connected
  Trajectory trajectory;     // the connecting arc when found
};

// Tries every horizontal emanation of from_zero and reports the first one
// that terminates at to_zero. Not finding one is a result, not an error.
ConnectionResult connection_search(const QuadraticDifferential& qd,
                                   int from_zero, int to_zero,
                                   const TraceOptions& opts = {});

// A trajectory polygon: finitely many vertices at critical points, with the
// interior angle at each, plus the orders of zeros strictly inside. The
// vertex at infinity (if the polygon closes through it) carries order
// -(2d + 2).
struct QPolygonVertex {
  int order;            // zero order n at the vertex (poles negative)
  real interior_angle;  // radians
};

struct QPolygon {
  std::vector<QPolygonVertex> vertices;
  std::vector<int> interior_orders;
};

// Residual of the trajectory-polygon index identity
//   sum_j (1 - phi_j (n_j + 2) / 2 pi) = 2 + sum_i n_i.
// Zero (to angle accuracy) for a valid polygon.
real teichmuller_check(const QPolygon& polygon);

}  // namespace qde

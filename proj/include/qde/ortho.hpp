#pragma once
// Orthogonal polynomials of the complex weight e^{-n V} on a contour class:
// high-precision contour moments, the Hankel system for the monic
// polynomial that is orthogonal to all lower powers, its zeros, and the
// comparison of the zero cloud against the equilibrium measure.

#include "qde/measure.hpp"
#include "qde/mpc.hpp"
#include "qde/potential.hpp"
#include "qde/qdiff.hpp"
#include "qde/scalars.hpp"

#include <vector>

namespace qde {

// Working precision in decimal digits for degree n: Hankel conditioning
// grows roughly exponentially in n, so the budget scales linearly.
inline long default_digits(int n) { return n > 8 ? 6L * n : 50L; }

// Vertical critical trajectory from the zero that escapes to infinity
// inside the requested decay sector. Throws when no emanation does.
Trajectory vertical_tail_to_sector(const QuadraticDifferential& qd,
                                   int zero_index, int sector);

struct QuadratureContour {
  std::vector<cplx> points;  // enters through from_sector, leaves through
                             // to_sector, truncated where the weight dies
  real entry_angle = 0;      // asymptotic direction of the entry end
  real exit_angle = 0;
};

// The steepest-descent-flavoured contour: the support arc plus the two
// vertical tails, decimated to quadrature-friendly spacing and truncated
// where |e^{-nV}| (1+|z|)^{2n} drops (P+10) digits below its maximum on
// the contour. Requires the one-cut connection to exist.
QuadratureContour quadrature_contour(const QuadraticDifferential& qd,
                                     const Potential& pot, int n,
                                     long digits);

// An independent contour in the same class: two straight rays through the
// origin along the bisectors of the entry and exit sectors, truncated by
// the same rule. Works in every phase (no arc needed).
QuadratureContour ray_contour(const Potential& pot, int n, long digits);

struct MomentTable {
  int n = 0;            // weight parameter in e^{-n V}
  long digits = 0;      // requested precision P
  Potential pot;        // the weight's potential
  std::vector<mpn::Cplx> entries;  // m_k = int z^k e^{-nV} dz, k ascending
  std::vector<cplx> contour;       // the polyline actually integrated
};

// Contour moments m_0 .. m_{count-1} by adaptive panel quadrature at P
// digits (panels bisect until each moment's defect fits a length-
// proportional budget). Throws with worst-panel diagnostics if a panel
// cannot converge within the subdivision limit.
MomentTable moments(const Potential& pot, const std::vector<cplx>& contour,
                    int n, int count, long digits);

struct OrthoPoly {
  int n = 0;
  long digits = 0;
  std::vector<mpn::Cplx> coeffs;  // ascending; coeffs[n] == 1 exactly
  std::vector<cplx> zeros;        // sorted by (re, im)
  std::vector<real> residuals;    // |int z^k P_n e^{-nV} dz| for k < n,
                                  // scaled by int |z^k P_n e^{-nV}| |dz|
};

// Monic degree-n polynomial orthogonal to 1, z, .., z^{n-1} against the
// table's weight: Gaussian elimination with partial pivoting on the Hankel
// system at the table's precision, zeros by Aberth iteration, residuals
// re-integrated along the stored contour with the solved polynomial.
// Throws "increase precision" when the moment matrix is singular at P.
OrthoPoly hankel_solve(const MomentTable& table, int n);

struct ZeroCloud {
  std::vector<cplx> zeros;         // all zeros, sorted as in OrthoPoly
  std::vector<real> dist_to_arc;   // distance to the support polyline
  std::vector<cplx> outliers;      // zeros farther than 0.5 from the arc,
                                   // reported instead of projected
  real max_distance = 0;           // max distance among projected zeros
  real kolmogorov = 0;             // empirical vs equilibrium CDF in the
                                   // arclength projection
};

// Empirical zero distribution against the equilibrium measure: nearest-
// point projection onto the support, max distance, and the Kolmogorov
// distance between the projected counting measure and the measure's own
// arclength CDF.
ZeroCloud compare_to_measure(const OrthoPoly& op, const ArcMeasure& m);

}  // namespace qde

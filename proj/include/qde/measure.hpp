#pragma once
// The probability measure carried by the support arc: density samples,
// logarithmic potential, variational-condition and S-property certificates,
// and the energy functional. Everything is built from a traced arc whose
// vertices already lie on the trajectory; the measure coordinate is the
// cumulative integral M(s) = mu([z1, s]), which doubles as the quadrature
// parameter (panels are graded into the arc endpoints automatically because
// the tracer's steps are).

#include "qde/potential.hpp"
#include "qde/qdiff.hpp"
#include "qde/scalars.hpp"

#include <vector>

namespace qde {

struct ArcMeasure {
  std::vector<cplx> points;    // arc vertices, zeros of Q at both ends
  std::vector<real> arclen;    // cumulative polyline length
  std::vector<real> density;   // d mu / d arclength at each vertex, 0 at ends
  std::vector<real> filling;   // M_i = mu of the initial piece, 0 .. mass
  std::vector<cplx> sqrt_q;    // continued branch at vertices, sign-fixed so
                               // that M increases along the arc
  std::vector<int> end_mult;   // multiplicity of the zero at vertex i, 0 if
                               // the vertex is not a zero of Q
  real mass = 0;

  // Every stride-th vertex (both endpoints kept): a coarser but otherwise
  // identical measure, for resolution self-consistency checks.
  ArcMeasure coarsened(int stride) const;
};

// Builds the measure from the traced support arc (or a chain of arcs when
// the support passes through an interior zero, as at the critical coupling).
// Legs must run head to tail; the outer endpoints must be zeros of Q. The
// branch of sqrt(Q) on each leg is fixed by the sign anchor: total mass
// positive. Throws "branch/arc mismatch" when Im D drifts along a leg by
// more than 1e-6 of the leg's D span (the polyline is not a horizontal
// trajectory) or when the measure coordinate fails to grow monotonically.
ArcMeasure density_from_q(const QuadraticDifferential& qd,
                          const std::vector<Trajectory>& legs);
ArcMeasure density_from_q(const QuadraticDifferential& qd,
                          const Trajectory& arc);

// U(z) = -int log|z - s| d mu(s). Off the arc this is plain graded panel
// quadrature; if z coincides with an arc vertex the two adjacent panels are
// integrated with the logarithmic singularity split off analytically.
real log_potential(const ArcMeasure& m, cplx z);

// log_potential at many points. The parallel flag distributes the points
// over threads; each entry is computed independently, so the output is
// bit-identical to the serial path.
std::vector<real> log_potential_batch(const ArcMeasure& m,
                                      const std::vector<cplx>& pts,
                                      bool parallel);

// Quadrature nodes for integrals against the measure: int f d mu is
// sum weights[j] * f(nodes[j]) for smooth f. Weights are positive and sum
// to the mass; nodes lie on the arc.
struct MeasureNodes {
  std::vector<cplx> nodes;
  std::vector<real> weights;
};
MeasureNodes quadrature_nodes(const ArcMeasure& m);

// Total variational function 2 U(z) + Re V(z).
real variational_value(const ArcMeasure& m, const Potential& pot, cplx z);

struct VariationalReport {
  real ell = 0;                    // estimated multiplier: mean of
                                   // 2U + Re V over interior arc vertices
  real on_support_deviation = 0;   // max |2U + Re V - ell| over the interior
  real off_support_margin = 0;     // min (2U + Re V - ell) over tail samples
  bool tails_increasing = false;   // 2U + Re V grows monotonically outward
};

// Checks the equilibrium conditions: equality on the support, inequality on
// the off-support extension (the vertical tails of the contour class).
// Each tail's first vertex is its basepoint on the support and is skipped;
// tail vertices beyond max_radius are ignored.
VariationalReport variational_check(const ArcMeasure& m, const Potential& pot,
                                    const std::vector<Trajectory>& tails,
                                    real max_radius = 8);

// max over interior vertices of |Re(sqrt(Q) tau)| / |sqrt(Q)|, the relative
// transverse component of sqrt(Q) dz along the polyline; tau is the unit
// tangent from a five-point stencil. Zero exactly when the polyline is a
// horizontal trajectory; this is the numerically checkable form of the
// equal-normal-derivatives property.
real s_property_residual(const QuadraticDifferential& qd,
                         const std::vector<cplx>& arc);
real s_property_residual(const QuadraticDifferential& qd, const ArcMeasure& m);

struct EnergyReport {
  real field_energy = 0;      // E = double log integral + int Re V d mu
  real external_term = 0;     // int Re V d mu
  real ell = 0;               // multiplier estimate reused from the arc
  real consistency_gap = 0;   // |ell - (2 E - external_term)|
};

// Energy of the measure in the external field and the multiplier identity
// ell = 2 E - int Re V d mu that the equilibrium measure must satisfy.
// The parallel flag only affects wall time, never the digits.
EnergyReport energy(const ArcMeasure& m, const Potential& pot,
                    bool parallel = false);

// Energy of the uniform unit measure on the same polyline; strictly larger
// than the equilibrium energy (spot check of minimality).
real uniform_field_energy(const ArcMeasure& m, const Potential& pot);

}  // namespace qde

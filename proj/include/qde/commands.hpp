#pragma once
// The five commands behind the executable. Each one composes the family
// modules into a pipeline, files the requested artifacts, and returns a
// report whose checks certify what was computed. Commands never print;
// callers render the report.

#include "qde/cubic.hpp"
#include "qde/measure.hpp"
#include "qde/potential.hpp"
#include "qde/qdiff.hpp"
#include "qde/quintic.hpp"
#include "qde/report.hpp"
#include "qde/scalars.hpp"

#include <string>
#include <vector>

namespace qde {

struct TraceRequest {
  int zero = 1;   // start zero index
  int angle = 0;  // emanation index at that zero
  Orientation orientation = Orientation::Horizontal;
  bool free_start = false;  // trace both ways through `start` instead
  cplx start{0, 0};
};

// differential + potential for the configured family
struct FamilySetup {
  QuadraticDifferential qd;
  Potential pot;
  std::string tag;  // filename stem, e.g. "cubic_K0.5" or "quintic_31"
};
FamilySetup family_setup(const RunConfig& cfg);

// tracer options with the config's capture tolerance applied
TraceOptions trace_options(const RunConfig& cfg);

// level drift normalized by the trajectory scale
real relative_drift(const Trajectory& t);

// positive outward excursion of the points past the triangle a, b, c
real triangle_excursion(cplx a, cplx b, cplx c, const std::vector<cplx>& pts);

// vertical tail endpoint row: right decay sector, small angular deviation
CheckResult tail_row(const std::string& name, const Trajectory& tail,
                     int want_sector, int d);

// the equilibrium certificates shared by both families: mass, variational
// conditions along arc and tails, transverse residual, energy identity,
// and a seeded reflection-symmetry spot check
void equilibrium_rows(ReportDocument& doc, const QuadraticDifferential& qd,
                      const Potential& pot, const ArcMeasure& m,
                      const Trajectory& tail_in, const Trajectory& tail_out,
                      const RunConfig& cfg);

// Phase classification, support arc and vertical tails, equilibrium
// measure certificates, figure. --critical instead reports the critical
// constants and their consistency.
ReportDocument cmd_cubic(const RunConfig& cfg);

// Closed-form vs numeric parameters, arc and tails with sector checks,
// guard triangle containment, equilibrium certificates, figure.
ReportDocument cmd_quintic(const RunConfig& cfg);

// Single-trajectory export with endpoint classification.
ReportDocument cmd_trace(const RunConfig& cfg, const TraceRequest& req);

// Contour moments, Hankel solve, zero cloud against the equilibrium
// measure (or the cluster split where no single arc exists).
ReportDocument cmd_zeros(const RunConfig& cfg);

}  // namespace qde

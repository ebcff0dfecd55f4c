#pragma once
// File renderers for the command-line surface: trajectory and zero CSV
// tables, SVG figures, and the JSON serializations of the high-precision
// objects. Everything formats through fixed printf patterns so identical
// inputs give byte-identical files.

#include "qde/measure.hpp"
#include "qde/ortho.hpp"
#include "qde/qdiff.hpp"
#include "qde/scalars.hpp"

#include <string>
#include <vector>

namespace qde {

// full 21 significant digits, enough to round-trip a long double
std::string fmt_full(real x);

// columns: index, arclength, re, im
std::string trajectory_csv(const std::vector<cplx>& points,
                           const std::vector<real>& arclen);
std::string trajectory_csv(const Trajectory& t);

// columns: index, re, im, dist_to_arc. dist is -1 when no arc exists.
std::string zeros_csv(const std::vector<cplx>& zeros,
                      const std::vector<real>& dist_to_arc);

// Figures are plain paths and circle markers in a fixed per-family viewbox
// (both families use a square of half-width 3.2 centered at the origin).
// The y axis flips at write time so figures match mathematical orientation.
class SvgFigure {
 public:
  explicit SvgFigure(const std::string& family);

  // polyline clipped to the initial portion inside the viewbox disk and
  // decimated to at most max_points vertices
  void path(const std::vector<cplx>& pts, const std::string& color,
            real width);
  void marker(cplx z, real radius, const std::string& color);
  std::string finish() const;

  // radius of the disk paths are clipped to
  real clip_radius() const { return half_ - 0.1L; }

 private:
  real half_ = 3.2L;
  std::string body_;
};

// MomentTable and OrthoPoly carry more digits than a double, so their
// numbers are decimal strings next to a "precision" field.
std::string ortho_json(const MomentTable& table, const OrthoPoly& poly);

// Zero cloud summary; "arc" records whether distances refer to a support
// arc (two-cut couplings have none and carry -1 distances).
std::string cloud_json(const ZeroCloud& cloud, bool has_arc, long digits);

// Endpoint classification sidecar for traced trajectories.
std::string endpoints_json(const std::vector<Trajectory>& pieces);

}  // namespace qde

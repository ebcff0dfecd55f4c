#pragma once
// Polyline geometry used by the trajectory tests and the connection search:
// distances, clipping, Hausdorff comparison, winding numbers.

#include "qde/scalars.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qde {

inline real dist_point_segment(cplx p, cplx a, cplx b) {
  cplx ab = b - a;
  real len2 = std::norm(ab);
  if (len2 == 0) return std::abs(p - a);
  real t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2;
  t = std::clamp(t, 0.0L, 1.0L);
  return std::abs(p - (a + t * ab));
}

inline real dist_point_polyline(cplx p, const std::vector<cplx>& poly) {
  real best = 1e300L;
  if (poly.size() == 1) return std::abs(p - poly[0]);
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    best = std::min(best, dist_point_segment(p, poly[i], poly[i + 1]));
  }
  return best;
}

// max over vertices of a of the distance to polyline b; symmetrize by hand
// when needed. Vertex spacing bounds the extra sampling error.
inline real directed_hausdorff(const std::vector<cplx>& a,
                               const std::vector<cplx>& b) {
  real worst = 0;
  for (cplx p : a) worst = std::max(worst, dist_point_polyline(p, b));
  return worst;
}

inline real hausdorff_distance(const std::vector<cplx>& a,
                               const std::vector<cplx>& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

// Initial portion of the polyline inside |z| <= radius, with the exit point
// interpolated onto the circle.
inline std::vector<cplx> clip_to_disk(const std::vector<cplx>& poly,
                                      real radius) {
  std::vector<cplx> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (std::abs(poly[i]) <= radius) {
      out.push_back(poly[i]);
      continue;
    }
    if (i > 0) {
      cplx a = poly[i - 1];
      cplx d = poly[i] - a;
      // smallest t in (0,1] with |a + t d| = radius
      real A = std::norm(d);
      real B = 2 * (a.real() * d.real() + a.imag() * d.imag());
      real C = std::norm(a) - radius * radius;
      real disc = B * B - 4 * A * C;
      if (disc > 0 && A > 0) {
        real t = (-B + sqrtl(disc)) / (2 * A);
        if (t > 0 && t <= 1) out.push_back(a + t * d);
      }
    }
    break;
  }
  return out;
}

// Points of the polyline outside every excluded disk.
inline std::vector<cplx> drop_near(const std::vector<cplx>& poly,
                                   const std::vector<cplx>& centers,
                                   real radius) {
  std::vector<cplx> out;
  for (cplx p : poly) {
    bool keep = true;
    for (cplx c : centers) {
      if (std::abs(p - c) < radius) {
        keep = false;
        break;
      }
    }
    if (keep) out.push_back(p);
  }
  return out;
}

inline real segment_segment_distance(cplx a1, cplx a2, cplx b1, cplx b2) {
  // No proper intersection test needed at our tolerances: endpoint-to-segment
  // distances bound the true distance within the sampling density, and we
  // additionally catch crossings via the orientation test.
  auto cross = [](cplx u, cplx v) {
    return u.real() * v.imag() - u.imag() * v.real();
  };
  real d1 = cross(a2 - a1, b1 - a1);
  real d2 = cross(a2 - a1, b2 - a1);
  real d3 = cross(b2 - b1, a1 - b1);
  real d4 = cross(b2 - b1, a2 - b1);
  if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0;
  return std::min(std::min(dist_point_segment(a1, b1, b2),
                           dist_point_segment(a2, b1, b2)),
                  std::min(dist_point_segment(b1, a1, a2),
                           dist_point_segment(b2, a1, a2)));
}

inline real polyline_min_distance(const std::vector<cplx>& a,
                                  const std::vector<cplx>& b) {
  real best = 1e300L;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      best = std::min(best,
                      segment_segment_distance(a[i], a[i + 1], b[j], b[j + 1]));
      if (best == 0) return 0;
    }
  }
  return best;
}

// Winding number of a closed polyline around z (last vertex joins the first).
inline int winding_number(const std::vector<cplx>& closed, cplx z) {
  real total = 0;
  for (std::size_t i = 0; i < closed.size(); ++i) {
    cplx u = closed[i] - z;
    cplx v = closed[(i + 1) % closed.size()] - z;
    total += std::arg(v / u);
  }
  return static_cast<int>(llroundl(total / (2 * PI)));
}

}  // namespace qde

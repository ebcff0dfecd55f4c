#pragma once
// External potentials V(z) and the sector decomposition of the plane that
// governs where exp(-n V) decays. For degree parameter d the decay sectors
// are S_j = ((2j-2)pi/d, (2j-1)pi/d) taken mod 2pi, j = 1..d, interleaved
// with growth gaps G_j = ((2j-1)pi/d, 2j pi/d).

#include "qde/poly.hpp"
#include "qde/scalars.hpp"

#include <vector>

namespace qde {

struct SectorId {
  bool decay;  // true: S_j, false: gap G_j
  int index;   // 1-based
};

// Which sector the direction `angle` (radians) falls in. Directions on a
// sector boundary are rejected, since membership is undefined there.
SectorId sector_of(int d, real angle);

// Bisector direction of S_j, resp. of G_j.
real sector_midpoint(int d, int j);
real gap_midpoint(int d, int j);

struct Potential {
  int d;                      // sector count parameter
  std::vector<cplx> v;        // ascending coefficients of V
  int from_sector;            // contour tail sectors (decay sectors)
  int to_sector;

  template <class C>
  C eval_v(const C& z) const {
    C acc = C(v.back());
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      acc = acc * z + C(v[i - 1]);
    }
    return acc;
  }
};

// V(z) = -i z^3 / 3 + i K z, contour running from S_2 to S_1.
Potential make_cubic_potential(real K);

// V(z) = -i z^5 / 5; phase p = 1 connects S_3 to S_1, p = 2 connects
// S_4 to S_5.
Potential make_quintic_potential(int p);

}  // namespace qde

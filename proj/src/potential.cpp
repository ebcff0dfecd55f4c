#include "qde/potential.hpp"

#include <cmath>
#include <sstream>

namespace qde {

SectorId sector_of(int d, real angle) {
  if (d < 2) throw Error("sector_of: d must be at least 2");
  const real two_pi = 2 * PI;
  real a = fmodl(angle, two_pi);
  if (a < 0) a += two_pi;
  real t = a * static_cast<real>(d) / PI;  // boundary at every integer
  real nearest = roundl(t);
  if (fabsl(t - nearest) < 1e-12L) {
    std::ostringstream msg;
    msg << "boundary angle: direction " << static_cast<double>(angle)
        << " lies on a sector boundary";
    throw Error(msg.str());
  }
  int k = static_cast<int>(floorl(t));
  if (k < 0) k = 0;
  if (k > 2 * d - 1) k = 2 * d - 1;
  if (k % 2 == 0) return {true, k / 2 + 1};
  return {false, (k + 1) / 2};
}

real sector_midpoint(int d, int j) {
  return static_cast<real>(4 * j - 3) * PI / static_cast<real>(2 * d);
}

real gap_midpoint(int d, int j) {
  return static_cast<real>(4 * j - 1) * PI / static_cast<real>(2 * d);
}

Potential make_cubic_potential(real K) {
  Potential pot;
  pot.d = 3;
  pot.v = {cplx{0, 0}, cplx{0, K}, cplx{0, 0}, cplx{0, -1.0L / 3.0L}};
  pot.from_sector = 2;
  pot.to_sector = 1;
  return pot;
}

Potential make_quintic_potential(int p) {
  if (p != 1 && p != 2) {
    throw Error("quintic potential: phase index must be 1 or 2");
  }
  Potential pot;
  pot.d = 5;
  pot.v = {cplx{0, 0}, cplx{0, 0}, cplx{0, 0},
           cplx{0, 0}, cplx{0, 0}, cplx{0, -1.0L / 5.0L}};
  if (p == 1) {
    pot.from_sector = 3;
    pot.to_sector = 1;
  } else {
    pot.from_sector = 4;
    pot.to_sector = 5;
  }
  return pot;
}

}  // namespace qde

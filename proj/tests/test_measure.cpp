#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qde/cubic.hpp"
#include "qde/measure.hpp"
#include "qde/potential.hpp"
#include "qde/qdiff.hpp"
#include "qde/quintic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace qde;

namespace {

// vertical critical trajectory from the zero that escapes into the
// requested decay sector
Trajectory tail_to_sector(const QuadraticDifferential& qd, int zero,
                          int sector) {
  int dirs = static_cast<int>(
      emanation_angles(qd, zero, Orientation::Vertical).size());
  for (int k = 0; k < dirs; ++k) {
    Trajectory t = trace_from_zero(qd, zero, k, Orientation::Vertical);
    if (t.end.kind != Endpoint::Kind::InfinityDirection) continue;
    SectorId s = sector_of(qd.d, t.end.angle);
    if (s.decay && s.index == sector) return t;
  }
  throw Error("no vertical tail reaches the requested sector");
}

// keeps every stride-th vertex; enough for sampling 2U + Re V along a tail
Trajectory thinned(const Trajectory& t, std::size_t stride) {
  Trajectory out;
  out.end = t.end;
  for (std::size_t i = 0; i < t.points.size(); i += stride) {
    out.points.push_back(t.points[i]);
  }
  if (out.points.back() != t.points.back()) {
    out.points.push_back(t.points.back());
  }
  return out;
}

real fit_slope(const std::vector<real>& x, const std::vector<real>& y) {
  real n = static_cast<real>(x.size());
  real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// straight chord between two zeros with honestly integrated level data;
// not a trajectory, so the measure constructor must reject it
Trajectory straight_chord_leg(const QuadraticDifferential& qd, int from,
                              int to, int n) {
  Trajectory leg;
  leg.start_zero = from;
  leg.end.kind = Endpoint::Kind::ZeroHit;
  leg.end.index = to;
  cplx a = qd.zeros[static_cast<std::size_t>(from)].center;
  cplx b = qd.zeros[static_cast<std::size_t>(to)].center;
  cplx ref = std::sqrt(qd.eval(a + (b - a) * (0.5L / n)));
  leg.points.push_back(a);
  leg.dvals.push_back({0, 0});
  cplx d{0, 0};
  for (int j = 1; j <= n; ++j) {
    cplx za = a + (b - a) * (static_cast<real>(j - 1) / n);
    cplx zb = a + (b - a) * (static_cast<real>(j) / n);
    d += integrate_sqrt_q(qd, za, zb, ref, 1e-12L) * cplx{0, -1} / PI;
    leg.points.push_back(zb);
    leg.dvals.push_back(d);
    if (j == 1) leg.branch_seed = ref;
  }
  return leg;
}

// uniform unit measure on the segment [-1, 1]: M = (x + 1) / 2, so
// dz/dM = 2 and the synthetic branch data is pi i / 2 at every vertex
ArcMeasure uniform_segment_measure(int n) {
  ArcMeasure m;
  for (int i = 0; i <= n; ++i) {
    real x = -1 + 2.0L * i / n;
    m.points.push_back({x, 0});
    m.arclen.push_back(x + 1);
    m.filling.push_back(0.5L * (x + 1));
    m.sqrt_q.push_back(cplx{0, PI / 2});
    m.density.push_back(0.5L);
    m.end_mult.push_back(0);
  }
  m.mass = 1;
  return m;
}

const Potential kFreePotential{1, {cplx{0, 0}}, 1, 1};

}  // namespace

TEST_CASE("log potential of the uniform segment measure matches closed forms") {
  ArcMeasure m = uniform_segment_measure(400);

  // -1/2 int_{-1}^{1} log|z - t| dt at z = 0 (a vertex), 2, and i
  CHECK(fabsl(log_potential(m, cplx{0, 0}) - 1.0L) < 1e-6L);
  CHECK(fabsl(log_potential(m, cplx{2, 0}) - (1 - 1.5L * logl(3))) < 1e-7L);
  CHECK(fabsl(log_potential(m, cplx{0, 1}) -
              0.5L * (2 - logl(2) - PI / 2)) < 1e-7L);

  // logarithmic energy of the uniform measure: 3/2 - log 2
  real e = uniform_field_energy(m, kFreePotential);
  CHECK(fabsl(e - (1.5L - logl(2))) < 1e-4L);

  MeasureNodes nodes = quadrature_nodes(m);
  real w_sum = 0, x2 = 0;
  for (std::size_t j = 0; j < nodes.nodes.size(); ++j) {
    CHECK(nodes.weights[j] > 0);
    w_sum += nodes.weights[j];
    x2 += nodes.weights[j] * nodes.nodes[j].real() * nodes.nodes[j].real();
  }
  CHECK(fabsl(w_sum - 1) < 1e-12L);
  CHECK(fabsl(x2 - 1.0L / 3) < 1e-10L);
}

TEST_CASE("unit mass and positive density on the cubic support arc") {
  cubic::Params p = cubic::params_from_k(0);
  QuadraticDifferential qd = cubic::build_q(p);
  ConnectionResult conn = connection_search(qd, 1, 2);
  REQUIRE(conn.found);
  ArcMeasure m = density_from_q(qd, conn.trajectory);

  CHECK(fabsl(m.mass - 1) < 1e-6L);
  CHECK(m.filling.front() == 0);
  CHECK(m.filling.back() == m.mass);
  REQUIRE(m.points.size() == m.density.size());
  REQUIRE(m.points.size() == m.filling.size());
  CHECK(m.end_mult.front() == 1);
  CHECK(m.end_mult.back() == 1);
  CHECK(m.density.front() == 0);
  CHECK(m.density.back() == 0);

  real total = m.arclen.back();
  for (std::size_t i = 0; i + 1 < m.points.size(); ++i) {
    CHECK(m.filling[i + 1] > m.filling[i]);
  }
  for (std::size_t i = 1; i + 1 < m.points.size(); ++i) {
    CHECK(m.density[i] >= -1e-9L);
    // along a true level curve sqrt(Q) dz is purely imaginary, so the
    // sample must coincide with |sqrt Q| / pi
    real ideal = std::abs(m.sqrt_q[i]) / PI;
    if (m.arclen[i] > 0.05L * total && m.arclen[i] < 0.95L * total) {
      CHECK(m.density[i] > 0);
      CHECK(fabsl(m.density[i] - ideal) < 1e-7L * (1 + ideal));
    }
  }

  MeasureNodes nodes = quadrature_nodes(m);
  real w_sum = 0;
  for (real w : nodes.weights) {
    CHECK(w > 0);
    w_sum += w;
  }
  CHECK(fabsl(w_sum - m.mass) < 1e-12L);
}

TEST_CASE("unit mass persists across the one-cut family") {
  cubic::Params p = cubic::params_from_k(0.5L);
  QuadraticDifferential qd = cubic::build_q(p);
  ConnectionResult conn = connection_search(qd, 1, 2);
  REQUIRE(conn.found);
  ArcMeasure m = density_from_q(qd, conn.trajectory);
  CHECK(fabsl(m.mass - 1) < 1e-6L);
}

TEST_CASE("critical support chains through the double zero with unit mass") {
  cubic::Params p = cubic::params_from_k(cubic::critical_constants().k_star);
  QuadraticDifferential qd = cubic::build_q(p);
  ConnectionResult left = connection_search(qd, 1, 0);
  ConnectionResult right = connection_search(qd, 0, 2);
  REQUIRE(left.found);
  REQUIRE(right.found);
  ArcMeasure m =
      density_from_q(qd, {left.trajectory, right.trajectory});

  CHECK(fabsl(m.mass - 1) < 1e-6L);

  // the junction vertex is the double zero: multiplicity 2, density 0
  std::size_t junction = left.trajectory.points.size() - 1;
  CHECK(m.end_mult[junction] == 2);
  CHECK(m.density[junction] == 0);
  CHECK(std::abs(m.points[junction] - cplx{0, -p.a}) < 1e-9L);
  for (std::size_t i = 0; i + 1 < m.points.size(); ++i) {
    CHECK(m.filling[i + 1] > m.filling[i]);
  }
}

TEST_CASE("quintic support arcs carry unit mass in both phases") {
  for (int phase : {1, 2}) {
    CAPTURE(phase);
    quintic::Params p = quintic::closed_form_params(phase);
    QuadraticDifferential qd = quintic::build_q(p);
    ConnectionResult conn = connection_search(qd, 1, 2);
    REQUIRE(conn.found);
    ArcMeasure m = density_from_q(qd, conn.trajectory);
    CHECK(fabsl(m.mass - 1) < 1e-6L);
    CHECK(m.density.front() == 0);
    CHECK(m.density.back() == 0);
  }
}

TEST_CASE("density vanishes like a square root at the arc endpoints") {
  cubic::Params p = cubic::params_from_k(0);
  QuadraticDifferential qd = cubic::build_q(p);
  ArcMeasure m = density_from_q(qd, connection_search(qd, 1, 2).trajectory);
  real total = m.arclen.back();

  for (int side : {0, 1}) {
    CAPTURE(side);
    std::vector<real> xs, ys;
    for (std::size_t i = 1; i + 1 < m.points.size(); ++i) {
      real s = side == 0 ? m.arclen[i] : total - m.arclen[i];
      if (s < 1e-3L * total || s > 0.1L * total) continue;
      if (m.density[i] <= 0) continue;
      xs.push_back(logl(s));
      ys.push_back(logl(m.density[i]));
    }
    REQUIRE(xs.size() >= 5);
    real slope = fit_slope(xs, ys);
    CHECK(fabsl(slope - 0.5L) < 0.1L);
  }
}

TEST_CASE("non-trajectory polylines are rejected by the branch check") {
  cubic::Params p = cubic::params_from_k(0);
  QuadraticDifferential qd = cubic::build_q(p);
  Trajectory chord = straight_chord_leg(qd, 1, 2, 160);
  CHECK_THROWS_WITH_AS(density_from_q(qd, chord),
                       doctest::Contains("branch/arc mismatch"), Error);
}

TEST_CASE("measure construction validates its legs") {
  cubic::Params p = cubic::params_from_k(0);
  QuadraticDifferential qd = cubic::build_q(p);
  Trajectory arc = connection_search(qd, 1, 2).trajectory;

  CHECK_THROWS_WITH_AS(density_from_q(qd, {arc, arc}),
                       doctest::Contains("chain head to tail"), Error);

  Trajectory tail = tail_to_sector(qd, 1, 2);
  CHECK_THROWS_WITH_AS(density_from_q(qd, tail),
                       doctest::Contains("join zeros"), Error);

  ArcMeasure m = density_from_q(qd, arc);
  CHECK_THROWS_WITH_AS(m.coarsened(0), doctest::Contains("stride"), Error);
}

TEST_CASE("log potential matches the free field far away") {
  cubic::Params p = cubic::params_from_k(0);
  QuadraticDifferential qd = cubic::build_q(p);
  ArcMeasure m = density_from_q(qd, connection_search(qd, 1, 2).trajectory);
  for (real angle : {0.3L, 2.0L, -2.5L}) {
    CAPTURE(angle);
    cplx z = 1e6L * cplx{cosl(angle), sinl(angle)};
    CHECK(fabsl(log_potential(m, z) + logl(std::abs(z))) < 1e-5L);
  }
}

TEST_CASE("log potential inherits the mirror symmetry of the measure") {
  cubic::Params cp = cubic::params_from_k(0);
  QuadraticDifferential cqd = cubic::build_q(cp);
  ArcMeasure cm =
      density_from_q(cqd, connection_search(cqd, 1, 2).trajectory);
  for (cplx z : {cplx{1.7L, 0.4L}, cplx{-0.3L, 2.1L}, cplx{0.9L, -1.2L}}) {
    CAPTURE(z.real());
    CHECK(fabsl(log_potential(cm, z) - log_potential(cm, -std::conj(z))) <
          1e-8L);
  }

  quintic::Params qp = quintic::closed_form_params(1);
  QuadraticDifferential qqd = quintic::build_q(qp);
  ArcMeasure qm =
      density_from_q(qqd, connection_search(qqd, 1, 2).trajectory);
  cplx z{0.8L, 1.3L};
  CHECK(fabsl(log_potential(qm, z) - log_potential(qm, -std::conj(z))) <
        1e-8L);
}

TEST_CASE("on-arc potential agrees with the nearby off-arc limit") {
  cubic::Params p = cubic::params_from_k(0);
  QuadraticDifferential qd = cubic::build_q(p);
  ArcMeasure m = density_from_q(qd, connection_search(qd, 1, 2).trajectory);
  std::size_t i = m.points.size() / 2;
  cplx tau = m.points[i + 1] - m.points[i - 1];
  cplx normal = cplx{0, 1} * tau / std::abs(tau);
  real on = log_potential(m, m.points[i]);
  CHECK(std::isfinite(static_cast<double>(on)));
  for (real side : {1.0L, -1.0L}) {
    real off = log_potential(m, m.points[i] + side * 1e-7L * normal);
    CHECK(fabsl(on - off) < 1e-4L);
  }
}

TEST_CASE("variational conditions hold for the cubic measures") {
  for (real K : {0.0L, 0.5L}) {
    CAPTURE(K);
    cubic::Params p = cubic::params_from_k(K);
    QuadraticDifferential qd = cubic::build_q(p);
    Potential pot = make_cubic_potential(K);
    ArcMeasure m =
        density_from_q(qd, connection_search(qd, 1, 2).trajectory);
    std::vector<Trajectory> tails{
        thinned(tail_to_sector(qd, 1, pot.from_sector), 4),
        thinned(tail_to_sector(qd, 2, pot.to_sector), 4)};
    VariationalReport rep = variational_check(m, pot, tails);
    CHECK(rep.on_support_deviation < 1e-4L);
    CHECK(rep.off_support_margin > -1e-6L);
    CHECK(rep.tails_increasing);
  }
}

TEST_CASE("variational conditions hold for the quintic measures") {
  for (int phase : {1, 2}) {
    CAPTURE(phase);
    quintic::Params p = quintic::closed_form_params(phase);
    QuadraticDifferential qd = quintic::build_q(p);
    Potential pot = make_quintic_potential(phase);
    ArcMeasure m =
        density_from_q(qd, connection_search(qd, 1, 2).trajectory);
    std::vector<Trajectory> tails{
        thinned(tail_to_sector(qd, 1, pot.from_sector), 4),
        thinned(tail_to_sector(qd, 2, pot.to_sector), 4)};
    VariationalReport rep = variational_check(m, pot, tails);
    CHECK(rep.on_support_deviation < 1e-4L);
    CHECK(rep.off_support_margin > -1e-6L);
    CHECK(rep.tails_increasing);
  }
}

TEST_CASE("energy identity and minimality at K = 0") {
  cubic::Params p = cubic::params_from_k(0);
  QuadraticDifferential qd = cubic::build_q(p);
  Potential pot = make_cubic_potential(0);
  ArcMeasure m = density_from_q(qd, connection_search(qd, 1, 2).trajectory);

  EnergyReport rep = energy(m, pot);
  CHECK(rep.consistency_gap < 1e-5L);
  CHECK(fabsl(rep.external_term - 1.0L / 3) < 1e-6L);

  // the equilibrium measure beats the uniform measure on the same arc
  real uniform = uniform_field_energy(m, pot);
  CHECK(uniform > rep.field_energy);

  // halving the resolution moves the energy by less than the tolerance
  EnergyReport coarse = energy(m.coarsened(2), pot);
  CHECK(fabsl(coarse.field_energy - rep.field_energy) < 1e-5L);
}

TEST_CASE("external term of the energy matches the moment anchors") {
  cubic::Params p = cubic::params_from_k(0.5L);
  QuadraticDifferential qd = cubic::build_q(p);
  ArcMeasure m = density_from_q(qd, connection_search(qd, 1, 2).trajectory);
  EnergyReport rep = energy(m, make_cubic_potential(0.5L));
  CHECK(fabsl(rep.external_term - 0.1744456352518680786L) < 1e-6L);
  CHECK(rep.consistency_gap < 1e-5L);

  quintic::Params qp = quintic::closed_form_params(1);
  QuadraticDifferential qqd = quintic::build_q(qp);
  ArcMeasure qm =
      density_from_q(qqd, connection_search(qqd, 1, 2).trajectory);
  EnergyReport qrep = energy(qm, make_quintic_potential(1));
  CHECK(fabsl(qrep.external_term - 0.2L) < 1e-6L);
  CHECK(qrep.consistency_gap < 1e-5L);
}

TEST_CASE("transverse residual separates true arcs from fakes") {
  cubic::Params p = cubic::params_from_k(0);
  QuadraticDifferential qd = cubic::build_q(p);
  ArcMeasure m = density_from_q(qd, connection_search(qd, 1, 2).trajectory);
  CHECK(s_property_residual(qd, m) < 1e-6L);

  std::vector<cplx> bent = m.points;
  bent[bent.size() / 2] += cplx{0, 0.05L};
  CHECK(s_property_residual(qd, bent) > 1e-3L);

  quintic::Params qp = quintic::closed_form_params(1);
  QuadraticDifferential qqd = quintic::build_q(qp);
  ArcMeasure qm =
      density_from_q(qqd, connection_search(qqd, 1, 2).trajectory);
  CHECK(s_property_residual(qqd, qm) < 1e-6L);
}

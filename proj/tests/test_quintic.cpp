#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qde/cubic.hpp"
#include "qde/gl.hpp"
#include "qde/polyline.hpp"
#include "qde/quintic.hpp"
#include "qde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace qde;
using namespace qde::quintic;

namespace {

// (1 / 2 pi) int sqrt(b^2 - s^2) T(s) ds over [x1, x2], the closed-form
// reduction of the square-root integrand along the chord.
cplx chord_prediction(const Params& p, real x1, real x2) {
  const auto& nodes = gl_nodes(48);
  const auto& weights = gl_weights(48);
  real mid = (x1 + x2) / 2;
  real half = (x2 - x1) / 2;
  cplx acc{0, 0};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    real s = mid + half * nodes[i];
    acc += weights[i] * half * sqrtl(p.b * p.b - s * s) * chord_factor(p, s);
  }
  return acc / (2 * PI);
}

}  // namespace

TEST_CASE("closed-form parameters hit their pinned values") {
  Params p1 = closed_form_params(1);
  CHECK(p1.phase == 1);
  CHECK(fabsl(p1.a + 1.108179289548012509336304L) < 5e-17L);
  CHECK(fabsl(p1.b - 1.34894254738097653881804L) < 5e-17L);
  CHECK(fabsl(p1.c - 0.4876639184004834716279603L) < 5e-17L);
  CHECK(fabsl(p1.d - 0.6780815626220220079493805L) < 5e-17L);
  CHECK(fabsl(p1.e + 0.797921603974247990482132L) < 5e-17L);
  CHECK(fabsl(p1.cube_radical - 6.316999259989225130415445L) < 1e-16L);
  CHECK(fabsl(p1.fifth_radical - 6.827294857606768602791445L) < 1e-16L);

  Params p2 = closed_form_params(2);
  CHECK(p2.phase == 2);
  CHECK(fabsl(p2.a + 0.9819718017792671451606948L) < 5e-17L);
  CHECK(fabsl(p2.b - 0.7744324774283679935250957L) < 5e-17L);
  CHECK(fabsl(p2.c + 1.311813272872006645676825L) < 5e-17L);
  CHECK(fabsl(p2.d - 1.034353594836711930809339L) < 5e-17L);
  CHECK(fabsl(p2.e - 0.1649207355463697502580649L) < 5e-17L);
  CHECK(fabsl(p2.cube_radical - 0.7428663310306990354607256L) < 1e-16L);
  CHECK(fabsl(p2.fifth_radical - 18.36538582020809303947554L) < 1e-15L);

  // shared structure of the zero layout
  for (const Params& p : {p1, p2}) {
    CHECK(fabsl(p.e - (p.a - p.c) / 2) < 1e-12L);
    CHECK(p.b > 0);
    CHECK(p.d > 0);
    CHECK(p.axis_zero().real() == 0);
    CHECK(p.pair_left() == -conj(p.pair_right()));
    CHECK(p.double_left() == -conj(p.double_right()));
  }
}

TEST_CASE("numeric solve reproduces the closed forms") {
  for (int phase : {1, 2}) {
    Params numeric = solve_params_numeric(phase);
    Params closed = closed_form_params(phase);
    CHECK(numeric.phase == phase);
    CHECK(fabsl(numeric.a - closed.a) < 1e-15L);
    CHECK(fabsl(numeric.b - closed.b) < 1e-15L);
    CHECK(fabsl(numeric.c - closed.c) < 1e-15L);
    CHECK(fabsl(numeric.d - closed.d) < 1e-15L);
    CHECK(fabsl(numeric.e - closed.e) < 1e-15L);
    CHECK(numeric.cube_radical == closed.cube_radical);
    CHECK(numeric.fifth_radical == closed.fifth_radical);
  }
}

TEST_CASE("coefficient and eliminated systems vanish at both branches") {
  for (int phase : {1, 2}) {
    for (const Params& p :
         {closed_form_params(phase), solve_params_numeric(phase)}) {
      for (real r : coefficient_system_residuals(p)) {
        CHECK(fabsl(r) < 1e-14L);
      }
      for (real t : reduced_system_residuals(p)) {
        CHECK(fabsl(t) < 1e-14L);
      }
      real c5 = powl(p.c, 5);
      CHECK(fabsl(28 * c5 * c5 + 108 * c5 - 3) < 1e-14L);
    }
  }
}

TEST_CASE("real-axis placement of the simple pair is rejected") {
  CHECK_THROWS_WITH_AS(reject_real_axis_pair(),
                       doctest::Contains("inconsistent"), Error);
  CHECK_THROWS_WITH_AS(reject_real_axis_pair(), doctest::Contains("-32"),
                       Error);
}

TEST_CASE("invalid phases are refused") {
  CHECK_THROWS_WITH_AS(closed_form_params(0), doctest::Contains("phase"),
                       Error);
  CHECK_THROWS_WITH_AS(closed_form_params(3), doctest::Contains("phase"),
                       Error);
  CHECK_THROWS_WITH_AS(solve_params_numeric(-1), doctest::Contains("phase"),
                       Error);
}

TEST_CASE("spectral polynomial has the pinned coefficients") {
  QuadraticDifferential q1 = build_q(closed_form_params(1));
  REQUIRE(q1.q.degree() == 8);
  CHECK(q1.d == 5);
  REQUIRE(q1.zeros.size() == 5);
  CHECK(q1.zeros[0].multiplicity == 2);
  CHECK(q1.zeros[1].multiplicity == 1);
  CHECK(q1.zeros[2].multiplicity == 1);
  CHECK(q1.zeros[3].multiplicity == 2);
  CHECK(q1.zeros[4].multiplicity == 2);
  CHECK(q1.q[8] == cplx{-0.25L, 0});
  for (int k : {4, 5, 6, 7}) {
    CHECK(std::abs(q1.q[static_cast<std::size_t>(k)]) < 1e-14L);
  }
  CHECK(std::abs(q1.q[3] - cplx{0, 1}) < 1e-14L);
  CHECK(fabsl(q1.q[2].real() + 0.40638659866706955969L) < 1e-14L);
  CHECK(fabsl(q1.q[2].imag()) < 1e-14L);
  CHECK(fabsl(q1.q[1].imag() - 0.4800049291125897609257L) < 1e-14L);
  CHECK(fabsl(q1.q[1].real()) < 1e-14L);
  CHECK(fabsl(q1.q[0].real() + 0.7594307593702604357741L) < 1e-14L);
  CHECK(fabsl(q1.q[0].imag()) < 1e-14L);

  QuadraticDifferential q2 = build_q(closed_form_params(2));
  CHECK(q2.q[8] == cplx{-0.25L, 0});
  for (int k : {4, 5, 6, 7}) {
    CHECK(std::abs(q2.q[static_cast<std::size_t>(k)]) < 1e-14L);
  }
  CHECK(std::abs(q2.q[3] - cplx{0, 1}) < 1e-14L);
  CHECK(fabsl(q2.q[2].real() - 1.093177727393338871397L) < 1e-14L);
  CHECK(fabsl(q2.q[1].imag() + 1.014986594168032797155L) < 1e-14L);
  CHECK(fabsl(q2.q[0].real() + 0.6733173253367234548303L) < 1e-14L);
}

TEST_CASE("conjugation symmetry across the imaginary axis") {
  Rng rng(5117u);
  for (int phase : {1, 2}) {
    QuadraticDifferential qd = build_q(closed_form_params(phase));
    for (int i = 0; i < 100; ++i) {
      cplx z{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      cplx direct = qd.eval(z);
      cplx mirrored = conj(qd.eval(-conj(z)));
      CHECK(std::abs(direct - mirrored) < 1e-13L * (1 + std::abs(direct)));
    }
  }
}

TEST_CASE("departure directions at the left simple zero") {
  TriangleReport r1 = triangle_guards(closed_form_params(1));
  CHECK(fabsl(r1.departures[0] + 2.325659595942878077323712L) < 1e-12L);
  CHECK(fabsl(r1.departures[1] + 0.2312644935496826759102618L) < 1e-12L);
  CHECK(fabsl(r1.departures[2] - 1.863130608843512892036642L) < 1e-12L);
  CHECK(r1.entering_index == 1);

  TriangleReport r2 = triangle_guards(closed_form_params(2));
  CHECK(fabsl(r2.departures[0] + 1.402728004696015773333784L) < 1e-12L);
  CHECK(fabsl(r2.departures[1] - 0.6916670976971797113463936L) < 1e-12L);
  CHECK(fabsl(r2.departures[2] - 2.786062200090375196026571L) < 1e-12L);
  CHECK(r2.entering_index == 1);

  // at a simple zero the vertical departures are the horizontal ones
  // rotated by pi
  QuadraticDifferential qd = build_q(closed_form_params(1));
  auto vertical = emanation_angles(qd, 1, Orientation::Vertical);
  REQUIRE(vertical.size() == 3);
  CHECK(fabsl(vertical[0] + 1.278462044746280431694457L) < 1e-12L);
  CHECK(fabsl(vertical[1] - 0.8159330576469151610134306L) < 1e-12L);
  CHECK(fabsl(vertical[2] - 2.910328160040110562679531L) < 1e-12L);
}

TEST_CASE("chord level is single signed and pinned at the midpoint") {
  TriangleReport r1 = triangle_guards(closed_form_params(1));
  CHECK(fabsl(r1.factor_cubic_coeff - 0.5170735857909413441892953L) < 1e-15L);
  CHECK(fabsl(r1.chord_integral_mid + 0.1724639865478674462591239L) < 1e-15L);
  CHECK(fabsl(r1.im_d_mid - 0.02744849596442724613278295L) < 1e-16L);
  CHECK(r1.chord_single_signed);
  CHECK(r1.im_d_min > 0);
  CHECK(r1.im_d_min <= r1.im_d_mid);

  TriangleReport r2 = triangle_guards(closed_form_params(2));
  CHECK(fabsl(r2.factor_cubic_coeff - 10.02525154625107475053018L) < 1e-14L);
  CHECK(fabsl(r2.chord_integral_mid - 1.514976611214737686428383L) < 1e-14L);
  CHECK(fabsl(r2.im_d_mid - 0.2411160163434340216130452L) < 1e-15L);
  CHECK(r2.chord_single_signed);
  CHECK(r2.im_d_min > 0);

  // raw integral signs differ between the branches; the exact midpoint
  // value is -2 b^5 / 15 + beta b^3 / 3
  for (int phase : {1, 2}) {
    Params p = closed_form_params(phase);
    real beta = half_line_guards(p).factor_cubic_coeff;
    real exact = -2 * powl(p.b, 5) / 15 + beta * powl(p.b, 3) / 3;
    CHECK(fabsl(chord_level_integral(p, 0) - exact) < 1e-15L);
    CHECK(chord_level_integral(p, 0.37L * p.b) ==
          chord_level_integral(p, -0.37L * p.b));
    CHECK(chord_level_integral(p, p.b) == 0);
    CHECK(chord_level_integral(p, -p.b) == 0);
    CHECK_THROWS_WITH_AS(chord_level_integral(p, 2 * p.b),
                         doctest::Contains("domain"), Error);
  }
}

TEST_CASE("tilted sides keep Re Q strictly negative") {
  TriangleReport r1 = triangle_guards(closed_form_params(1));
  Params p1 = closed_form_params(1);
  CHECK(r1.apex.real() == 0);
  CHECK(r1.apex.imag() < p1.c);
  CHECK(std::abs(r1.tilted_dir - cplx{1, -1} / sqrtl(2.0L)) < 1e-18L);
  CHECK(r1.tilted_re_q_negative);
  CHECK(fabsl(r1.tilted_re_q_max + 0.01706723778032976245739819L) < 1e-13L);
  CHECK(r1.tilted_re_q.eval(cplx{-p1.b / 2, 0}).real() < 0);

  // the restriction is an honest restriction of Q
  QuadraticDifferential qd1 = build_q(p1);
  for (real x : {-1.2L, -0.7L, -0.1L}) {
    cplx on_side = cplx{1, -1} * x + cplx{0, p1.c - p1.b};
    CHECK(fabsl(r1.tilted_re_q.eval(cplx{x, 0}).real() -
                qd1.eval(on_side).real()) < 1e-14L);
  }

  // pinned expansion in the side parameter
  const real want[9] = {-0.7591509458L, -1.748503622L, 0.0L,
                        15.27016696L,   38.51879785L,  35.77824556L,
                        0.0L,           -13.78045806L, -4.0L};
  REQUIRE(r1.tilted_re_q.degree() == 8);
  for (int k = 0; k <= 8; ++k) {
    CHECK(fabsl(r1.tilted_re_q[static_cast<std::size_t>(k)].real() -
                want[k]) < 1e-7L);
  }
  const cplx roots[8] = {{-2.574068348L, 0},
                         {-1.348942547L, 0},
                         {-0.6044352637L, -0.3452356904L},
                         {-0.6044352637L, 0.3452356904L},
                         {-0.1997037301L, -0.383521753L},
                         {-0.1997037301L, 0.383521753L},
                         {0.3468887477L, 0},
                         {1.739285619L, 0}};
  REQUIRE(r1.tilted_re_q_roots.size() == 8);
  // conjugate pairs may swap under the (re, im) sort, so match as sets
  for (const cplx& found : r1.tilted_re_q_roots) {
    real nearest_expected = 100;
    for (const cplx& want_root : roots) {
      nearest_expected = fminl(nearest_expected,
                               static_cast<real>(std::abs(found - want_root)));
    }
    CHECK(nearest_expected < 1e-7L);
  }
  for (const cplx& want_root : roots) {
    real nearest_found = 100;
    for (const cplx& found : r1.tilted_re_q_roots) {
      nearest_found = fminl(nearest_found,
                            static_cast<real>(std::abs(found - want_root)));
    }
    CHECK(nearest_found < 1e-7L);
  }

  TriangleReport r2 = triangle_guards(closed_form_params(2));
  Params p2 = closed_form_params(2);
  CHECK(r2.apex.imag() > p2.c);
  CHECK(std::abs(r2.tilted_dir - cplx{1, 1} / sqrtl(2.0L)) < 1e-18L);
  CHECK(r2.tilted_re_q_negative);
  CHECK(fabsl(r2.tilted_re_q_max + 0.004228688603757496080547351L) < 1e-13L);
  // the left simple zero sits on the side, so its abscissa is a root
  real nearest = 100;
  for (const cplx& root : r2.tilted_re_q_roots) {
    nearest = fminl(nearest, static_cast<real>(std::abs(root + p2.b)));
  }
  CHECK(nearest < 1e-7L);
}

TEST_CASE("chord reduction matches the path integral of sqrt Q") {
  for (int phase : {1, 2}) {
    Params p = closed_form_params(phase);
    QuadraticDifferential qd = build_q(p);
    real x1 = phase == 1 ? -0.9L : -0.65L * p.b;
    real x2 = phase == 1 ? 0.5L : 0.5L * p.b;
    std::vector<cplx> path;
    for (int i = 0; i <= 32; ++i) {
      path.push_back({x1 + (x2 - x1) * i / 32, p.c});
    }
    cplx dv = D_value(qd, path, +1);
    cplx pred = cplx{0, 1} * chord_prediction(p, x1, x2);
    real gap = fminl(std::abs(dv - pred), std::abs(dv + pred));
    CHECK(gap < 1e-12L);
    if (phase == 1) CHECK(std::abs(dv - pred) < 1e-12L);
  }
}

TEST_CASE("half-line guards: phase 1 blocks crossings") {
  HalfLineReport r = half_line_guards(closed_form_params(1));
  CHECK(r.phase == 1);
  CHECK(fabsl(r.factor_cubic_coeff - 0.5170735857909413441892953L) < 1e-15L);
  CHECK(fabsl(r.factor_quad_lead - 1.950655673601933886511841L) < 1e-15L);
  CHECK(fabsl(r.factor_quad_const - 1.310854073662514227555797L) < 1e-15L);
  CHECK(r.im_positive);
  CHECK(r.re_negative);
  CHECK(r.blocks_crossing);
  CHECK(std::isnan(r.im_flip));
  CHECK(std::isnan(r.re_flip));

  Params p = closed_form_params(1);
  cplx at_end = d_prime_on_half_line(p, -p.b);
  CHECK(at_end.real() == 0);
  CHECK(at_end.imag() == 0);
  CHECK_THROWS_WITH_AS(d_prime_on_half_line(p, -p.b + 0.01L),
                       doctest::Contains("domain"), Error);
}

TEST_CASE("half-line guards: phase 2 has both sign changes") {
  HalfLineReport r = half_line_guards(closed_form_params(2));
  CHECK(!r.im_positive);
  CHECK(!r.re_negative);
  CHECK(!r.blocks_crossing);
  CHECK(fabsl(r.im_flip + 1.192049173413263986571642L) < 1e-14L);
  CHECK(fabsl(r.re_flip + 3.166267762879677040048824L) < 1e-14L);

  Params p = closed_form_params(2);
  cplx near = d_prime_on_half_line(p, -1.0L);
  CHECK(near.imag() > 0);
  CHECK(near.real() > 0);
  cplx mid = d_prime_on_half_line(p, -1.5L);
  CHECK(mid.imag() < 0);
  CHECK(mid.real() > 0);
  cplx far = d_prime_on_half_line(p, -3.5L);
  CHECK(far.imag() < 0);
  CHECK(far.real() < 0);
}

TEST_CASE("direction tables are closed form and reused across families") {
  DirectionTable t5 = direction_table(5);
  REQUIRE(t5.horizontal.size() == 10);
  REQUIRE(t5.vertical.size() == 10);
  CHECK(t5.horizontal[0] == 0);
  CHECK(fabsl(t5.horizontal[4] - 4 * PI / 5) < 1e-17L);
  CHECK(fabsl(t5.horizontal[5] - PI) < 1e-17L);
  CHECK(fabsl(t5.horizontal[6] + 4 * PI / 5) < 1e-17L);
  CHECK(fabsl(t5.vertical[0] - PI / 10) < 1e-17L);
  CHECK(fabsl(t5.vertical[4] - 9 * PI / 10) < 1e-17L);
  CHECK(fabsl(t5.vertical[5] + 9 * PI / 10) < 1e-17L);

  QuadraticDifferential qd5 = build_q(closed_form_params(1));
  for (Orientation orient :
       {Orientation::Horizontal, Orientation::Vertical}) {
    auto computed = infinity_directions(qd5, orient);
    auto table =
        orient == Orientation::Horizontal ? t5.horizontal : t5.vertical;
    std::sort(table.begin(), table.end());
    REQUIRE(computed.size() == table.size());
    for (std::size_t k = 0; k < table.size(); ++k) {
      CHECK(fabsl(computed[k] - table[k]) < 1e-13L);
    }
  }

  DirectionTable t3 = direction_table(3);
  auto sorted3 = t3.horizontal;
  std::sort(sorted3.begin(), sorted3.end());
  auto cubic_dirs = infinity_directions(
      cubic::build_q(cubic::params_from_k(0.0L)), Orientation::Horizontal);
  REQUIRE(sorted3.size() == cubic_dirs.size());
  for (std::size_t k = 0; k < sorted3.size(); ++k) {
    CHECK(fabsl(sorted3[k] - cubic_dirs[k]) < 1e-13L);
  }

  CHECK_THROWS_WITH_AS(direction_table(0), doctest::Contains("degree"),
                       Error);
}

TEST_CASE("support arc stays inside the triangle and reaches the mirror") {
  for (int phase : {1, 2}) {
    Params p = closed_form_params(phase);
    QuadraticDifferential qd = build_q(p);
    TriangleReport rep = triangle_guards(p);
    Trajectory arc = trace_from_zero(qd, 1, rep.entering_index,
                                     Orientation::Horizontal);
    REQUIRE(arc.end.kind == Endpoint::Kind::ZeroHit);
    CHECK(arc.end.index == 2);

    const real slack = 1e-3L;
    bool inside = true;
    real min_abs_re = 100;
    for (const cplx& z : arc.points) {
      real x = z.real();
      real y = z.imag();
      min_abs_re = fminl(min_abs_re, fabsl(x));
      if (fabsl(x) > p.b + slack) inside = false;
      if (fabsl(x) <= p.b) {
        if (phase == 1) {
          if (y > p.c + slack) inside = false;
          if (y < p.c - p.b + fabsl(x) - slack) inside = false;
        } else {
          if (y < p.c - slack) inside = false;
          if (y > p.c + p.b - fabsl(x) + slack) inside = false;
        }
      }
    }
    CHECK(inside);
    CHECK(min_abs_re < 0.05L);  // the arc crosses the imaginary axis
  }
}

TEST_CASE("phase 1 far field: wedge endpoints, enclosed set, guarded line") {
  Params p = closed_form_params(1);
  QuadraticDifferential qd = build_q(p);

  Trajectory upper = trace_from_zero(qd, 1, 2, Orientation::Horizontal);
  REQUIRE(upper.end.kind == Endpoint::Kind::InfinityDirection);
  CHECK(fabsl(upper.end.angle - 4 * PI / 5) < 1e-12L);
  CHECK(upper.end.deviation < 0.02L);
  CHECK(upper.end.index == 8);

  Trajectory lower = trace_from_zero(qd, 1, 0, Orientation::Horizontal);
  REQUIRE(lower.end.kind == Endpoint::Kind::InfinityDirection);
  CHECK(fabsl(lower.end.angle - PI) < 1e-12L);
  CHECK(lower.end.deviation < 0.02L);
  CHECK(lower.end.index == 9);

  Trajectory split = trace_from_zero(qd, 1, 2, Orientation::Vertical);
  REQUIRE(split.end.kind == Endpoint::Kind::InfinityDirection);
  CHECK(fabsl(split.end.angle - 9 * PI / 10) < 1e-12L);
  CHECK(split.end.deviation < 0.02L);
  CHECK(split.end.index == 9);

  // closed loop: out along the upper arc, around at large radius, back
  // along the lower arc
  std::vector<cplx> loop(upper.points.begin(), upper.points.end());
  cplx far_upper = upper.points.back();
  cplx far_lower = lower.points.back();
  real arg_u = std::arg(far_upper);
  real arg_l = std::arg(far_lower);
  if (arg_l < 0) arg_l += 2 * PI;
  real rad_u = std::abs(far_upper);
  real rad_l = std::abs(far_lower);
  for (int k = 1; k <= 200; ++k) {
    real s = static_cast<real>(k) / 200;
    loop.push_back(std::polar(rad_u * powl(rad_l / rad_u, s),
                              arg_u + (arg_l - arg_u) * s));
  }
  loop.insert(loop.end(), lower.points.rbegin(), lower.points.rend());

  CHECK(winding_number(loop, qd.zeros[0].center) == 0);
  CHECK(winding_number(loop, qd.zeros[2].center) == 0);
  CHECK(winding_number(loop, qd.zeros[3].center) == 0);
  CHECK(winding_number(loop, qd.zeros[4].center) == 0);
  cplx split_mid = split.points[split.points.size() / 2];
  CHECK(winding_number(loop, split_mid) == 1);

  // none of the three arcs recrosses the horizontal half-line
  std::vector<cplx> half_line{cplx{-48, p.c}, cplx{-p.b - 0.01L, p.c}};
  std::vector<cplx> left_zero{qd.zeros[1].center};
  for (const Trajectory* t : {&upper, &lower, &split}) {
    auto kept = drop_near(t->points, left_zero, 0.1L);
    CHECK(polyline_min_distance(kept, half_line) > 0.01L);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qde/cubic.hpp"
#include "qde/rng.hpp"

#include <cmath>

using namespace qde;
using namespace qde::cubic;

TEST_CASE("support half-width solves its sextic for random K") {
  Rng rng(911u);
  for (int i = 0; i < 100; ++i) {
    real K = rng.uniform(-3, 3);
    real b = solve_b(K);
    CHECK(b > 0);
    real residual = powl(b, 6) - 2 * K * powl(b, 4) - 8;
    CHECK(fabsl(residual) < 1e-10L);
  }
}

TEST_CASE("parameter values at pinned K") {
  Params p0 = params_from_k(0);
  CHECK(fabsl(p0.b - 1.414213562373095048801689L) < 1e-15L);
  CHECK(fabsl(p0.a - 1.0L) < 1e-15L);
  CHECK(fabsl(p0.c - 1.0L) < 1e-15L);
  CHECK(fabsl(p0.C + 0.75L) < 1e-15L);

  Params ph = params_from_k(0.5L);
  CHECK(fabsl(ph.b - 1.547533092979295852808678L) < 1e-14L);
  CHECK(fabsl(ph.a - 0.83512234848136651429162L) < 1e-14L);
  CHECK(fabsl(ph.C + 0.5391630942443957642738025L) < 1e-14L);

  Params p2 = params_from_k(2);
  CHECK(fabsl(p2.b - 2.100271139829612719283241L) < 1e-14L);
  CHECK(fabsl(p2.a - 0.4533976515164037676447465L) < 1e-14L);
}

TEST_CASE("spectral polynomial coefficients match the expanded form") {
  Rng rng(912u);
  for (int i = 0; i < 8; ++i) {
    real K = i == 0 ? 0 : (i == 1 ? 0.5L : (i == 2 ? 2 : rng.uniform(-2, 2.5L)));
    Params p = params_from_k(K);
    QuadraticDifferential qd = build_q(p);
    REQUIRE(qd.q.degree() == 4);
    // ascending: C, i, K/2, 0, -1/4
    CHECK(std::abs(qd.q[0] - cplx{p.C, 0}) < 1e-12L);
    CHECK(std::abs(qd.q[1] - cplx{0, 1}) < 1e-12L);
    CHECK(std::abs(qd.q[2] - cplx{K / 2, 0}) < 1e-12L);
    CHECK(std::abs(qd.q[3]) < 1e-12L);
    CHECK(std::abs(qd.q[4] - cplx{-0.25L, 0}) < 1e-15L);
    REQUIRE(qd.zeros.size() == 3);
    CHECK(qd.d == 3);
  }
}

TEST_CASE("critical constants from two routes") {
  const CriticalConstants& cc = critical_constants();
  CHECK(fabsl(cc.v_star - 3.150037074084747666391442L) < 1e-13L);
  CHECK(fabsl(cc.a_star - 0.6821733957815825855174933L) < 1e-14L);
  CHECK(fabsl(cc.b_star - 1.712251710374104185492217L) < 1e-14L);
  CHECK(fabsl(cc.k_star - 1.000542417927346864115619L) < 1e-13L);
  CHECK(fabsl(cc.k_star - (1 / cc.a_star - cc.a_star * cc.a_star)) < 1e-12L);
  // The critical half-width also solves the sextic at K*.
  CHECK(fabsl(solve_b(cc.k_star) - cc.b_star) < 1e-13L);
}

TEST_CASE("axis level closed forms agree") {
  for (int i = 0; i <= 100; ++i) {
    real a = 0.3L + 2.7L * static_cast<real>(i) / 100;
    Params p;
    p.K = 0;  // unused by the axis formula
    p.a = a;
    p.c = a;
    p.b = sqrtl(2 / a);
    p.C = 0;
    CHECK(fabsl(im_d_on_axis(-a, p) - im_d_at_double_zero(a)) < 1e-12L);
  }
}

TEST_CASE("axis level at the double zero: values, growth, derivative") {
  CHECK(fabsl(im_d_at_double_zero(1) - 0.3648518319110678479163533L) <
        1e-15L);
  CHECK(fabsl(PI * im_d_at_double_zero(1) - 1.146215834780588843900394L) <
        1e-14L);

  real prev = im_d_at_double_zero(0.1L);
  for (int i = 1; i < 1000; ++i) {
    real a = 0.1L + 4.9L * static_cast<real>(i) / 999;
    real cur = im_d_at_double_zero(a);
    CHECK(cur > prev);
    prev = cur;
  }

  real h = 1e-6L;
  real deriv =
      (im_d_at_double_zero(1 + h) - im_d_at_double_zero(1 - h)) / (2 * h);
  CHECK(fabsl(deriv - 1.169545201850514161858802L) < 1e-9L);

  CHECK_THROWS_WITH_AS(im_d_at_double_zero(0), doctest::Contains("domain"),
                       Error);
  CHECK_THROWS_WITH_AS(im_d_at_double_zero(-1), doctest::Contains("domain"),
                       Error);
}

TEST_CASE("phase classification is monotone in K") {
  CHECK(classify_phase(0) == Phase::OneCut);
  CHECK(classify_phase(0.5L) == Phase::OneCut);
  CHECK(classify_phase(2) == Phase::TwoCut);
  CHECK(classify_phase(critical_constants().k_star) == Phase::Critical);

  bool seen_late = false;
  for (int i = 0; i < 200; ++i) {
    real K = -2 + 4.5L * static_cast<real>(i) / 199;
    Phase ph = classify_phase(K);
    if (ph != Phase::OneCut) seen_late = true;
    if (seen_late) CHECK(ph != Phase::OneCut);
  }
}

TEST_CASE("axis level roots bracket the double zero") {
  Params p0 = params_from_k(0);
  auto [y1, y2] = find_y1_y2(p0);
  CHECK(fabsl(y1 - 0.6371599341355999677957213L) < 1e-13L);
  CHECK(fabsl(y2 + 2.207566657819961898343355L) < 1e-13L);
  CHECK(y2 < -p0.a);
  CHECK(-p0.a < y1);
  CHECK(fabsl(im_d_on_axis(y1, p0)) < 1e-15L);
  CHECK(fabsl(im_d_on_axis(y2, p0)) < 1e-15L);

  Params ph = params_from_k(0.5L);
  auto [y1h, y2h] = find_y1_y2(ph);
  CHECK(fabsl(y1h - 0.2710975133521384846817475L) < 1e-13L);
  CHECK(fabsl(y2h + 1.735070426286762064491846L) < 1e-13L);

  Params p2 = params_from_k(2);
  CHECK_THROWS_WITH_AS(find_y1_y2(p2), doctest::Contains("no real roots"),
                       Error);
}

TEST_CASE("segment level values and domain") {
  Params p0 = params_from_k(0);
  CHECK(fabsl(im_d_on_segment(p0, 0) + 0.1500527193595176782591999L) <
        1e-15L);
  CHECK(fabsl(im_d_on_segment(p0, 1.4L)) < 1e-2L);
  CHECK(im_d_on_segment(p0, 0.5L) == im_d_on_segment(p0, -0.5L));
  CHECK_THROWS_WITH_AS(im_d_on_segment(p0, p0.b), doctest::Contains("domain"),
                       Error);
  CHECK_THROWS_WITH_AS(im_d_on_segment(p0, -2), doctest::Contains("domain"),
                       Error);
}

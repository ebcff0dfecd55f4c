#include "qde/qdiff.hpp"

#include "qde/gl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace qde {

namespace {

constexpr real kLongDoubleU = 5.42101086242752217e-20L;

real wrap_angle(real a) {
  const real two_pi = 2 * PI;
  a = fmodl(a, two_pi);
  if (a > PI) a -= two_pi;
  if (a <= -PI) a += two_pi;
  return a;
}

}  // namespace

namespace {

const std::pair<std::vector<real>, std::vector<real>>& gl_rule(int n) {
  static std::map<int, std::pair<std::vector<real>, std::vector<real>>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<real> x, w;
    gauss_legendre<real>(n, PI, 1e-19L, x, w);
    it = cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first;
  }
  return it->second;
}

}  // namespace

const std::vector<real>& gl_nodes(int n) { return gl_rule(n).first; }

const std::vector<real>& gl_weights(int n) { return gl_rule(n).second; }

real QuadraticDifferential::scale() const {
  real biggest = 0;
  for (const auto& z : zeros) biggest = std::max(biggest, std::abs(z.center));
  return 1 + biggest;
}

real QuadraticDifferential::nearest_zero(cplx z, int* index) const {
  real best = 1e300L;
  int best_i = -1;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    real dist = std::abs(z - zeros[i].center);
    if (dist < best) {
      best = dist;
      best_i = static_cast<int>(i);
    }
  }
  if (index) *index = best_i;
  return best;
}

QuadraticDifferential make_quad_diff(PolyC q, int d) {
  if (q.degree() != 2 * d - 2) {
    throw Error("quadratic differential: degree must equal 2d - 2");
  }
  QuadraticDifferential qd;
  qd.zeros = poly_roots(q, kLongDoubleU);
  qd.q = std::move(q);
  qd.d = d;
  return qd;
}

QuadraticDifferential make_quad_diff_from_roots(
    cplx leading, const std::vector<RootCluster<cplx>>& zeros, int d) {
  std::vector<cplx> flat;
  for (const auto& z : zeros) {
    for (int k = 0; k < z.multiplicity; ++k) flat.push_back(z.center);
  }
  QuadraticDifferential qd;
  qd.q = PolyC::from_roots(flat, leading);
  qd.zeros = zeros;
  qd.d = d;
  if (qd.q.degree() != 2 * d - 2) {
    throw Error("quadratic differential: degree must equal 2d - 2");
  }
  return qd;
}

std::vector<real> emanation_angles(const QuadraticDifferential& qd,
                                   int zero_index, Orientation orientation) {
  if (zero_index < 0 ||
      zero_index >= static_cast<int>(qd.zeros.size())) {
    throw Error("emanation_angles: zero index out of range");
  }
  const auto& z0 = qd.zeros[static_cast<std::size_t>(zero_index)];
  const int m = z0.multiplicity;
  // arg of the first nonvanishing derivative via the factored form:
  // Q^(m)(z0) / m! = lead * prod_{j != 0} (z0 - z_j)^{mult_j}
  cplx prod = qd.q[static_cast<std::size_t>(qd.q.degree())];
  for (std::size_t j = 0; j < qd.zeros.size(); ++j) {
    if (static_cast<int>(j) == zero_index) continue;
    cplx base = z0.center - qd.zeros[j].center;
    for (int k = 0; k < qd.zeros[j].multiplicity; ++k) prod *= base;
  }
  real phi = std::arg(prod);
  std::vector<real> out;
  for (int k = 0; k < m + 2; ++k) {
    real num = orientation == Orientation::Horizontal
                   ? PI - phi + 2 * PI * static_cast<real>(k)
                   : -phi + 2 * PI * static_cast<real>(k);
    out.push_back(wrap_angle(num / static_cast<real>(m + 2)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<real> infinity_directions(const QuadraticDifferential& qd,
                                      Orientation orientation) {
  real arg_lead = std::arg(qd.q[static_cast<std::size_t>(qd.q.degree())]);
  std::vector<real> out;
  for (int k = 0; k < 2 * qd.d; ++k) {
    real theta = (PI / 2 - arg_lead / 2 + PI * static_cast<real>(k)) /
                 static_cast<real>(qd.d);
    if (orientation == Orientation::Vertical) {
      theta += PI / static_cast<real>(2 * qd.d);
    }
    out.push_back(wrap_angle(theta));
  }
  std::sort(out.begin(), out.end());
  return out;
}

cplx sqrt_against(cplx v, cplx ref, real* safety) {
  cplx w = std::sqrt(v);
  real rm = std::abs(ref);
  real wm = std::abs(w);
  if (rm == 0 || wm == 0) {
    if (safety) *safety = 0;
    return w;
  }
  real align = (w.real() * ref.real() + w.imag() * ref.imag()) / (rm * wm);
  if (align < 0) {
    w = -w;
    align = -align;
  }
  if (safety) *safety = align;
  return w;
}

namespace {

struct ChordIntegrator {
  const QuadraticDifferential& qd;
  real tol_rate;  // absolute tolerance per unit chord length
  int max_depth = 48;

  cplx eval_w(cplx z, cplx& ref) const {
    real safety = 0;
    cplx w = sqrt_against(qd.eval(z), ref, &safety);
    ref = w;
    return w;
  }

  // int sqrt(Q) dz over [a, b], branch continued from ref; ref is updated
  // to the continued value at b.
  cplx integrate(cplx a, cplx b, cplx& ref, int depth) const {
    const auto& x8 = gl_nodes(8);
    const auto& w8 = gl_weights(8);
    const auto& x16 = gl_nodes(16);
    const auto& w16 = gl_weights(16);
    cplx dz = b - a;
    cplx mid = a + 0.5L * dz;

    cplx ref8 = ref;
    cplx i8{0, 0};
    real worst_safety = 1;
    for (int i = 0; i < 8; ++i) {
      cplx z = mid + (0.5L * x8[static_cast<std::size_t>(i)]) * dz;
      real safety = 0;
      cplx w = sqrt_against(qd.eval(z), ref8, &safety);
      ref8 = w;
      worst_safety = std::min(worst_safety, safety);
      i8 += w8[static_cast<std::size_t>(i)] * w;
    }
    cplx ref16 = ref;
    cplx i16{0, 0};
    real mass16 = 0;
    for (int i = 0; i < 16; ++i) {
      cplx z = mid + (0.5L * x16[static_cast<std::size_t>(i)]) * dz;
      real safety = 0;
      cplx w = sqrt_against(qd.eval(z), ref16, &safety);
      ref16 = w;
      worst_safety = std::min(worst_safety, safety);
      i16 += w16[static_cast<std::size_t>(i)] * w;
      mass16 += w16[static_cast<std::size_t>(i)] * std::abs(w);
    }
    i8 *= 0.5L * dz;
    i16 *= 0.5L * dz;
    mass16 *= 0.5L * std::abs(dz);

    real err = std::abs(i16 - i8);
    // The requested budget gains a floor of a few ulps of the panel's
    // absolute mass: below that, err is summation roundoff and further
    // splitting cannot reduce it (it would recurse to max_depth instead).
    real budget = tol_rate * std::abs(dz) + 32 * kLongDoubleU * mass16;
    if ((err <= budget && worst_safety > 0.3L) || depth >= max_depth) {
      if (depth >= max_depth && err > 16 * budget) {
        throw Error(
            "branch ambiguity: sqrt(Q) could not be continued accurately "
            "along the path");
      }
      real safety = 0;
      cplx wb = sqrt_against(qd.eval(b), ref16, &safety);
      ref = wb;
      return i16;
    }
    cplx left = integrate(a, mid, ref, depth + 1);
    cplx right = integrate(mid, b, ref, depth + 1);
    return left + right;
  }
};

}  // namespace

cplx integrate_sqrt_q(const QuadraticDifferential& qd, cplx a, cplx b,
                      cplx& ref, real tol_rate) {
  ChordIntegrator integ{qd, tol_rate, 48};
  return integ.integrate(a, b, ref, 0);
}

cplx D_value(const QuadraticDifferential& qd, const std::vector<cplx>& path,
             int branch_sign) {
  if (path.size() < 2) throw Error("D_value: path needs at least two points");
  if (branch_sign != 1 && branch_sign != -1) {
    throw Error("D_value: branch sign must be +1 or -1");
  }
  const real guard = 1e-9L * qd.scale();
  for (cplx z : path) {
    if (qd.nearest_zero(z) < guard) {
      throw Error("branch ambiguity: path passes through a zero of Q");
    }
  }
  cplx ref = static_cast<real>(branch_sign) * std::sqrt(qd.eval(path[0]));
  ChordIntegrator integ{qd, 1e-15L * qd.scale(), 48};
  cplx total{0, 0};
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    total += integ.integrate(path[i], path[i + 1], ref, 0);
  }
  // D = (1 / pi i) * int sqrt(Q) dz
  return total * cplx{0, -1} / PI;
}

real teichmuller_check(const QPolygon& polygon) {
  real lhs = 0;
  for (const auto& v : polygon.vertices) {
    lhs += 1 - v.interior_angle * static_cast<real>(v.order + 2) / (2 * PI);
  }
  real rhs = 2;
  for (int n : polygon.interior_orders) rhs += static_cast<real>(n);
  return lhs - rhs;
}

}  // namespace qde

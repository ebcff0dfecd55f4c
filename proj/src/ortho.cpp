#include "qde/ortho.hpp"

#include "qde/gl.hpp"
#include "qde/poly.hpp"
#include "qde/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <utility>
#include <vector>

namespace qde {

namespace {

using mpn::Cplx;
using mpn::Real;

// The potential coefficients are small rationals (1/3, 1/5, half-integer
// couplings) stored in long double; promoting the stored value verbatim
// would poison every digit past the 19th. A coordinate within one ulp of
// p/q for small p, q is promoted as the exact rational; anything else
// keeps its long double value unchanged.
Real promote_coordinate(real x) {
  if (x == 0) return Real(0);
  for (int q = 1; q <= 16; ++q) {
    real y = x * q;
    real r = nearbyintl(y);
    if (fabsl(r) <= 64 && fabsl(y - r) <= 1e-17L * fmaxl(1.0L, fabsl(y))) {
      return Real(static_cast<long>(r)) / Real(q);
    }
  }
  return Real(x);
}

std::vector<Cplx> promote_potential(const Potential& pot) {
  std::vector<Cplx> c;
  c.reserve(pot.v.size());
  for (const cplx& a : pot.v) {
    c.emplace_back(promote_coordinate(a.real()), promote_coordinate(a.imag()));
  }
  return c;
}

// Rows of the contour integrand: z^k * factor(z) * e^{-n V(z)} for
// k = 0 .. count-1, evaluated in one pass per point.
struct Integrand {
  std::vector<Cplx> vcoef;  // V at working precision, ascending
  int n = 1;
  const std::vector<Cplx>* factor = nullptr;  // optional polynomial factor
  int count = 1;

  void eval(const Cplx& z, std::vector<Cplx>& out) const {
    Cplx acc = vcoef.back();
    for (std::size_t i = vcoef.size() - 1; i > 0; --i) {
      acc = acc * z + vcoef[i - 1];
    }
    Cplx w = exp(Real(-n) * acc);
    if (factor) {
      Cplx p = factor->back();
      for (std::size_t i = factor->size() - 1; i > 0; --i) {
        p = p * z + (*factor)[i - 1];
      }
      w = w * p;
    }
    out[0] = w;
    Cplx zk(Real(1));
    for (int k = 1; k < count; ++k) {
      zk = zk * z;
      out[k] = zk * w;
    }
  }
};

struct PanelValue {
  std::vector<Cplx> vals;
  std::vector<Real> mass;  // sum |f_k| |dz|, filled only when wanted
};

// Adaptive panel quadrature: every panel must reproduce itself under one
// bisection to within a length-proportional share of the entry's budget,
// or it splits. A panel that still disagrees at the depth limit aborts
// with its location and the worst entry in the message.
struct Quadrature {
  const Integrand* f = nullptr;
  std::vector<Real> nodes, weights;
  std::vector<Real> rate;  // accepted defect per unit length, per entry
  bool want_mass = false;
  int depth_limit = 30;

  std::vector<Cplx> total;
  std::vector<Real> total_mass;

  void eval_panel(const Cplx& a, const Cplx& b, PanelValue& out,
                  std::vector<Cplx>& scratch) const {
    int m = f->count;
    out.vals.assign(static_cast<std::size_t>(m), Cplx());
    out.mass.assign(want_mass ? static_cast<std::size_t>(m) : 0, Real(0));
    const Real half(0.5);
    Cplx mid = (a + b) * half;
    Cplx hd = (b - a) * half;
    Real hlen = abs(hd);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Cplx z = mid + hd * nodes[i];
      f->eval(z, scratch);
      Cplx jw = hd * weights[i];
      Real aw = hlen * weights[i];
      for (int k = 0; k < m; ++k) {
        out.vals[static_cast<std::size_t>(k)] +=
            scratch[static_cast<std::size_t>(k)] * jw;
        if (want_mass) {
          out.mass[static_cast<std::size_t>(k)] +=
              abs(scratch[static_cast<std::size_t>(k)]) * aw;
        }
      }
    }
  }

  void refine(const Cplx& a, const Cplx& b, const PanelValue& whole,
              int depth, std::vector<Cplx>& scratch) {
    Cplx mid = (a + b) * Real(0.5);
    PanelValue left, right;
    eval_panel(a, mid, left, scratch);
    eval_panel(mid, b, right, scratch);
    Real len = abs(b - a);
    int bad = -1;
    Real bad_defect(0), bad_allow(0);
    for (int k = 0; k < f->count; ++k) {
      std::size_t u = static_cast<std::size_t>(k);
      Real defect = abs(left.vals[u] + right.vals[u] - whole.vals[u]);
      Real allow = rate[u] * len;
      if (defect > allow) {
        bad = k;
        bad_defect = defect;
        bad_allow = allow;
        break;
      }
    }
    if (bad < 0) {
      for (int k = 0; k < f->count; ++k) {
        std::size_t u = static_cast<std::size_t>(k);
        total[u] += left.vals[u] + right.vals[u];
        if (want_mass) total_mass[u] += left.mass[u] + right.mass[u];
      }
      return;
    }
    if (depth >= depth_limit) {
      cplx c = to_cplx(mid);
      std::ostringstream msg;
      msg << "contour quadrature stalled after " << depth_limit
          << " bisections: panel near (" << static_cast<double>(c.real())
          << ", " << static_cast<double>(c.imag()) << ") of length "
          << static_cast<double>(len) << " misses the budget for entry "
          << bad << " (defect " << static_cast<double>(bad_defect)
          << ", allowance " << static_cast<double>(bad_allow)
          << "); refine the contour or raise the precision";
      throw Error(msg.str());
    }
    refine(a, mid, left, depth + 1, scratch);
    refine(mid, b, right, depth + 1, scratch);
  }

  // Pre-pass sets each entry's budget from single-panel magnitudes (no
  // cancellation), then every initial segment is refined to acceptance.
  void run(const std::vector<cplx>& contour, long digits) {
    int m = f->count;
    std::vector<Cplx> scratch(static_cast<std::size_t>(m));
    std::vector<Cplx> pts;
    pts.reserve(contour.size());
    for (const cplx& z : contour) pts.emplace_back(z);

    std::vector<PanelValue> seg(contour.size() - 1);
    std::vector<Real> scale(static_cast<std::size_t>(m), Real(0));
    Real total_len(0);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      eval_panel(pts[i], pts[i + 1], seg[i], scratch);
      for (int k = 0; k < m; ++k) {
        scale[static_cast<std::size_t>(k)] +=
            abs(seg[i].vals[static_cast<std::size_t>(k)]);
      }
      total_len += abs(pts[i + 1] - pts[i]);
    }
    Real smax(0);
    for (const Real& s : scale) {
      if (s > smax) smax = s;
    }
    if (smax == 0) throw Error("integrand vanishes on the whole contour");
    Real floor = smax * pow(Real(10), -static_cast<int>(digits));
    Real tol = pow(Real(10), -static_cast<int>(digits + 6));
    rate.assign(static_cast<std::size_t>(m), Real(0));
    for (int k = 0; k < m; ++k) {
      std::size_t u = static_cast<std::size_t>(k);
      rate[u] = (scale[u] > floor ? scale[u] : floor) * tol / total_len;
    }

    total.assign(static_cast<std::size_t>(m), Cplx());
    total_mass.assign(want_mass ? static_cast<std::size_t>(m) : 0, Real(0));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      refine(pts[i], pts[i + 1], seg[i], 0, scratch);
    }
  }
};

Quadrature make_quadrature(const Integrand& f, long digits, bool want_mass) {
  Quadrature quad;
  quad.f = &f;
  quad.want_mass = want_mass;
  Real tol = pow(Real(10), -static_cast<int>(digits + 4));
  gauss_legendre(24, mpn::pi_value(), tol, quad.nodes, quad.weights);
  return quad;
}

// log of the integrand ceiling |e^{-nV}| (1+|z|)^{2n}: the truncation
// rule keeps the contour until this has dropped (P+10) decades below its
// maximum, so every discarded tail is invisible at P digits.
real log_weight_gain(const Potential& pot, int n, cplx z) {
  return -static_cast<real>(n) * pot.eval_v(z).real() +
         2.0L * n * log1pl(std::abs(z));
}

std::vector<cplx> decimate(const std::vector<cplx>& pts, real spacing) {
  std::vector<cplx> out;
  out.push_back(pts.front());
  real acc = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    acc += std::abs(pts[i] - pts[i - 1]);
    if (acc >= spacing || i + 1 == pts.size()) {
      out.push_back(pts[i]);
      acc = 0;
    }
  }
  return out;
}

// Walk outward from an end whose weight is still too large, scaling the
// endpoint away from the origin until the truncation threshold is met.
void extend_to_threshold(std::vector<cplx>& pts, bool front,
                         const Potential& pot, int n, real thr) {
  cplx z = front ? pts.front() : pts.back();
  std::vector<cplx> extra;
  while (log_weight_gain(pot, n, z) > thr) {
    z *= 1.25L;
    if (std::abs(z) > 50) {
      throw Error(
          "weight decay threshold unreachable within radius 50 of the "
          "origin");
    }
    extra.push_back(z);
  }
  if (extra.empty()) return;
  if (front) {
    pts.insert(pts.begin(), extra.rbegin(), extra.rend());
  } else {
    pts.insert(pts.end(), extra.begin(), extra.end());
  }
}

void truncate_to_threshold(std::vector<cplx>& pts, const Potential& pot,
                           int n, long digits) {
  real gmax = log_weight_gain(pot, n, pts.front());
  for (const cplx& z : pts) gmax = fmaxl(gmax, log_weight_gain(pot, n, z));
  real thr = gmax - static_cast<real>(digits + 10) * logl(10.0L);
  extend_to_threshold(pts, true, pot, n, thr);
  extend_to_threshold(pts, false, pot, n, thr);

  std::vector<real> g(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    g[i] = log_weight_gain(pot, n, pts[i]);
  }
  std::size_t first = 0;
  while (first < g.size() && g[first] < thr) ++first;
  std::size_t last = g.size() - 1;
  while (last > first && g[last] < thr) --last;
  std::size_t a = first > 0 ? first - 1 : 0;
  std::size_t b = last + 1 < g.size() ? last + 1 : g.size() - 1;
  pts.assign(pts.begin() + static_cast<std::ptrdiff_t>(a),
             pts.begin() + static_cast<std::ptrdiff_t>(b + 1));
}

void check_sector(int d, real angle, int wanted, const char* which) {
  SectorId s = sector_of(d, angle);
  if (!s.decay || s.index != wanted) {
    std::ostringstream msg;
    msg << "contour " << which << " angle " << static_cast<double>(angle)
        << " is not inside decay sector " << wanted;
    throw Error(msg.str());
  }
}

}  // namespace

Trajectory vertical_tail_to_sector(const QuadraticDifferential& qd,
                                   int zero_index, int sector) {
  std::vector<real> angles =
      emanation_angles(qd, zero_index, Orientation::Vertical);
  for (int which = 0; which < static_cast<int>(angles.size()); ++which) {
    Trajectory t =
        trace_from_zero(qd, zero_index, which, Orientation::Vertical);
    if (t.end.kind != Endpoint::Kind::InfinityDirection) continue;
    SectorId s = sector_of(qd.d, t.end.angle);
    if (s.decay && s.index == sector) return t;
  }
  std::ostringstream msg;
  msg << "no vertical trajectory from zero " << zero_index
      << " escapes into decay sector " << sector;
  throw Error(msg.str());
}

QuadratureContour quadrature_contour(const QuadraticDifferential& qd,
                                     const Potential& pot, int n,
                                     long digits) {
  if (pot.d != qd.d) {
    throw Error("potential and differential disagree on the sector count");
  }
  Trajectory tail_in = vertical_tail_to_sector(qd, 1, pot.from_sector);
  Trajectory tail_out = vertical_tail_to_sector(qd, 2, pot.to_sector);
  ConnectionResult conn = connection_search(qd, 1, 2);
  if (!conn.found) {
    throw Error(
        "no support arc joins the two simple zeros; this phase needs a ray "
        "contour");
  }

  real spacing = 0.02L * qd.scale();
  std::vector<cplx> head = decimate(tail_in.points, spacing);
  std::vector<cplx> arc = decimate(conn.trajectory.points, spacing);
  std::vector<cplx> tail = decimate(tail_out.points, spacing);

  QuadratureContour out;
  out.points.assign(head.rbegin(), head.rend());
  out.points.insert(out.points.end(), arc.begin() + 1, arc.end());
  out.points.insert(out.points.end(), tail.begin() + 1, tail.end());
  out.entry_angle = tail_in.end.angle;
  out.exit_angle = tail_out.end.angle;

  truncate_to_threshold(out.points, pot, n, digits);
  check_sector(qd.d, out.entry_angle, pot.from_sector, "entry");
  check_sector(qd.d, out.exit_angle, pot.to_sector, "exit");
  return out;
}

QuadratureContour ray_contour(const Potential& pot, int n, long digits) {
  real th_in = sector_midpoint(pot.d, pot.from_sector);
  real th_out = sector_midpoint(pot.d, pot.to_sector);
  const real r0 = 1e-3L;
  const real growth = 1.04L;

  real gmax = log_weight_gain(pot, n, cplx{0, 0});
  for (real th : {th_in, th_out}) {
    for (real r = r0; r <= 50.0L; r *= growth) {
      gmax = fmaxl(gmax, log_weight_gain(pot, n, std::polar(r, th)));
    }
  }
  real thr = gmax - static_cast<real>(digits + 10) * logl(10.0L);

  auto cut_radius = [&](real th) {
    real r_peak = r0;
    real best = log_weight_gain(pot, n, std::polar(r0, th));
    for (real r = r0; r <= 50.0L; r *= growth) {
      real g = log_weight_gain(pot, n, std::polar(r, th));
      if (g > best) {
        best = g;
        r_peak = r;
      }
    }
    for (real r = r_peak; r <= 50.0L; r *= growth) {
      if (log_weight_gain(pot, n, std::polar(r, th)) <= thr) return r;
    }
    throw Error(
        "weight decay threshold unreachable within radius 50 of the origin");
  };

  auto ladder = [](real th, real rcut) {
    std::vector<cplx> v;  // far end toward the origin, geometrically
    for (real r = rcut; r > rcut * 1e-3L; r *= 0.7L) {
      v.push_back(std::polar(r, th));
    }
    return v;
  };

  std::vector<cplx> in = ladder(th_in, cut_radius(th_in));
  std::vector<cplx> away = ladder(th_out, cut_radius(th_out));
  QuadratureContour out;
  out.points = std::move(in);
  out.points.push_back(cplx{0, 0});
  out.points.insert(out.points.end(), away.rbegin(), away.rend());
  out.entry_angle = th_in;
  out.exit_angle = th_out;
  return out;
}

MomentTable moments(const Potential& pot, const std::vector<cplx>& contour,
                    int n, int count, long digits) {
  if (n < 1) throw Error("weight parameter n must be positive");
  if (count < 2 * n + 1) {
    throw Error("moment count must cover powers 0 through 2n");
  }
  if (digits < 30 || (n >= 8 && digits < 50)) {
    throw Error("requested precision is too low for this degree");
  }
  if (contour.size() < 2) throw Error("contour needs at least two vertices");
  for (std::size_t i = 0; i + 1 < contour.size(); ++i) {
    if (contour[i] == contour[i + 1]) {
      throw Error("contour has a zero-length segment");
    }
  }

  // 20 guard digits: the panel acceptance floor is set by roundoff in the
  // panel sums, which must sit far below the 10^-(P+6) defect budget even
  // where the integrand is locally thousands of times its contour average.
  mpn::DigitsGuard guard(static_cast<unsigned>(digits + 20));
  Integrand f{promote_potential(pot), n, nullptr, count};
  Quadrature quad = make_quadrature(f, digits, false);
  quad.run(contour, digits);

  MomentTable table{n, digits, pot, std::move(quad.total), contour};

  // The weight obeys w(-conj z) = conj w(z) and every admissible contour
  // class is symmetric under that reflection, so even moments are real
  // and odd ones imaginary. A table that breaks this identity was
  // integrated wrongly.
  Real smax(0);
  for (const Cplx& e : table.entries) {
    Real v = abs(e);
    if (v > smax) smax = v;
  }
  Real lim = smax * pow(Real(10), -static_cast<int>(digits / 2));
  for (int k = 0; k < count; ++k) {
    const Cplx& e = table.entries[static_cast<std::size_t>(k)];
    Cplx mirror = k % 2 == 0 ? conj(e) : -conj(e);
    if (abs(e - mirror) > lim) {
      throw Error(
          "moments break the reflection symmetry of the weight; the "
          "contour is outside the admissible class");
    }
  }
  return table;
}

OrthoPoly hankel_solve(const MomentTable& table, int n) {
  if (n < 1) throw Error("degree must be positive");
  if (table.entries.size() < static_cast<std::size_t>(2 * n)) {
    throw Error("moment table too short for this degree");
  }
  mpn::DigitsGuard guard(static_cast<unsigned>(table.digits + 20));

  // Hankel system: sum_k c_k m_{j+k} = -m_{j+n} for j = 0 .. n-1.
  std::size_t un = static_cast<std::size_t>(n);
  std::vector<std::vector<Cplx>> a(un, std::vector<Cplx>(un));
  std::vector<Cplx> rhs(un);
  Real scale0(0);
  for (std::size_t j = 0; j < un; ++j) {
    for (std::size_t k = 0; k < un; ++k) {
      a[j][k] = table.entries[j + k];
      Real v = abs(a[j][k]);
      if (v > scale0) scale0 = v;
    }
    rhs[j] = -table.entries[j + un];
  }
  Real singular = scale0 * pow(Real(10), -static_cast<int>(table.digits));
  for (std::size_t col = 0; col < un; ++col) {
    std::size_t piv = col;
    Real best = abs(a[col][col]);
    for (std::size_t r = col + 1; r < un; ++r) {
      Real v = abs(a[r][col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= singular) {
      throw Error(
          "moment matrix is numerically singular at this precision; "
          "increase precision");
    }
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(rhs[piv], rhs[col]);
    }
    for (std::size_t r = col + 1; r < un; ++r) {
      Cplx factor = a[r][col] / a[col][col];
      for (std::size_t k = col; k < un; ++k) {
        a[r][k] -= factor * a[col][k];
      }
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<Cplx> coeffs(un + 1);
  coeffs[un] = Cplx(Real(1));
  for (std::size_t rj = un; rj-- > 0;) {
    Cplx s = rhs[rj];
    for (std::size_t k = rj + 1; k < un; ++k) {
      s -= a[rj][k] * coeffs[k];
    }
    coeffs[rj] = s / a[rj][rj];
  }

  OrthoPoly op;
  op.n = n;
  op.digits = table.digits;
  op.coeffs = coeffs;

  Poly<Cplx> p(coeffs);
  std::vector<Cplx> roots =
      aberth_roots(p, pow(Real(10), -static_cast<int>(table.digits)));
  op.zeros.reserve(roots.size());
  for (const Cplx& r : roots) op.zeros.push_back(to_cplx(r));
  std::sort(op.zeros.begin(), op.zeros.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });

  // Orthogonality residuals, re-integrated with the solved polynomial and
  // scaled by the absolute-mass integral of each row.
  Integrand f{promote_potential(table.pot), table.n, &op.coeffs, n};
  Quadrature quad = make_quadrature(f, table.digits, true);
  quad.run(table.contour, table.digits);
  op.residuals.reserve(un);
  for (std::size_t k = 0; k < un; ++k) {
    op.residuals.push_back(
        static_cast<real>(abs(quad.total[k]) / quad.total_mass[k]));
  }
  return op;
}

ZeroCloud compare_to_measure(const OrthoPoly& op, const ArcMeasure& m) {
  ZeroCloud cloud;
  cloud.zeros = op.zeros;
  std::vector<real> fs;
  for (const cplx& z : op.zeros) {
    real best = 0;
    real f_at = 0;
    bool seen = false;
    for (std::size_t i = 0; i + 1 < m.points.size(); ++i) {
      cplx a = m.points[i];
      cplx seg = m.points[i + 1] - a;
      real len2 = std::norm(seg);
      real t = len2 > 0
                   ? std::clamp(((z - a) * std::conj(seg)).real() / len2,
                                0.0L, 1.0L)
                   : 0.0L;
      real dist = std::abs(z - (a + t * seg));
      if (!seen || dist < best) {
        seen = true;
        best = dist;
        f_at = (m.filling[i] + t * (m.filling[i + 1] - m.filling[i])) / m.mass;
      }
    }
    cloud.dist_to_arc.push_back(best);
    if (best > 0.5L) {
      cloud.outliers.push_back(z);
    } else {
      cloud.max_distance = fmaxl(cloud.max_distance, best);
      fs.push_back(f_at);
    }
  }
  if (fs.empty()) {
    cloud.kolmogorov = 1;
    return cloud;
  }
  std::sort(fs.begin(), fs.end());
  real count = static_cast<real>(fs.size());
  real worst = 0;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    real hi = static_cast<real>(j + 1) / count - fs[j];
    real lo = fs[j] - static_cast<real>(j) / count;
    worst = fmaxl(worst, fmaxl(hi, lo));
  }
  cloud.kolmogorov = worst;
  return cloud;
}

}  // namespace qde

#include "qde/gl.hpp"
#include "qde/qdiff.hpp"

#include <algorithm>
#include <cmath>

namespace qde {

namespace {

real wrap_pi(real a) {
  const real two_pi = 2 * PI;
  a = fmodl(a, two_pi);
  if (a > PI) a -= two_pi;
  if (a <= -PI) a += two_pi;
  return a;
}

// int sqrt(Q) dz from the zero z0 outward to z0 + R e^{i psi}. The square
// root vanishes like a power at z0, so the path is graded toward the zero
// by t = u^2 and integrated with a 16 point rule. The branch is anchored by
// continuity at the OUTER end (value w_outer) and chained inward, which is
// the only well-defined direction near a zero.
cplx graded_leg(const QuadraticDifferential& qd, cplx z0, real psi, real big_r,
                cplx w_outer) {
  const auto& xs = gl_nodes(16);
  const auto& ws = gl_weights(16);
  const cplx dir{cosl(psi), sinl(psi)};
  const real big_u = sqrtl(big_r);
  cplx ref = w_outer;
  cplx acc{0, 0};
  for (int i = 15; i >= 0; --i) {
    real u = big_u * (xs[static_cast<std::size_t>(i)] + 1) / 2;
    cplx z = z0 + (u * u) * dir;
    cplx w = sqrt_against(qd.eval(z), ref);
    ref = w;
    acc += ws[static_cast<std::size_t>(i)] * (2 * u) * w;
  }
  return acc * (big_u / 2) * dir;
}

class Tracer {
 public:
  Tracer(const QuadraticDifferential& qd, Orientation ori, int sigma,
         const TraceOptions& opts)
      : qd_(qd),
        ori_(ori),
        sigma_(sigma),
        opts_(opts),
        scale_(qd.scale()),
        r_escape_(opts.escape_factor * qd.scale()) {}

  // level coordinate: the conserved part of D along this orientation
  real level_of(cplx d) const {
    return ori_ == Orientation::Horizontal ? d.imag() : d.real();
  }

  cplx tangent(cplx w) const {
    cplx cw = std::conj(w) / std::abs(w);
    if (ori_ == Orientation::Horizontal) {
      return static_cast<real>(sigma_) * cplx{0, 1} * cw;
    }
    return static_cast<real>(sigma_) * cw;
  }

  // Trajectory main loop. z / w / d are the start state (d = D relative to
  // the trajectory origin), level the conserved coordinate to hold.
  void run(Trajectory& traj, cplx z, cplx w, cplx d, real level) {
    traj.level = level;
    traj.orientation = ori_;
    if (traj.points.empty()) {
      traj.points.push_back(z);
      traj.arclen.push_back(0);
      traj.dvals.push_back(d);
    }

    const real h_cap_base = opts_.step_factor * scale_;
    const real h_min = 1e-12L * scale_;
    real h = traj.start_zero >= 0 ? 0.5L * opts_.seed_offset_factor * scale_
                                  : 0.1L * h_cap_base;
    const real skip_start_len = 10 * opts_.seed_offset_factor * scale_;

    bool have_r1 = false;
    real r1 = 0, th1 = 0;

    for (long step = 0; step < opts_.max_steps; ++step) {
      // step caps: base size, far-field growth, stay away from zeros
      real dist = qd_.nearest_zero(z);
      real cap = std::max(h_cap_base, opts_.step_factor * std::abs(z));
      cap = std::min(cap, 0.4L * dist);
      h = std::min(h, cap);
      if (h < h_min) {
        traj.end.kind = Endpoint::Kind::Truncated;
        traj.end.reason = "step size underflow near a branch point";
        return;
      }

      cplx z_pred;
      real rot = 0;
      if (!rk4(z, w, h, z_pred, rot) || rot > 3 * opts_.angle_step) {
        h /= 2;
        continue;
      }

      cplx ref = w;
      cplx delta_d =
          integrate_sqrt_q(qd_, z, z_pred, ref, 1e-11L) * cplx{0, -1} / PI;
      cplx w_pred = ref;

      // transverse correction back onto the level line
      real drift = level_of(d + delta_d) - level;
      real eps = -static_cast<real>(sigma_) * drift * PI / std::abs(w_pred);
      if (fabsl(eps) > 0.25L * h) {
        h /= 2;
        continue;
      }
      cplx nu = cplx{0, 1} * tangent(w_pred);
      cplx z_new = z_pred + eps * nu;
      cplx delta_d2 =
          integrate_sqrt_q(qd_, z_pred, z_new, ref, 1e-11L) * cplx{0, -1} / PI;
      cplx w_new = ref;

      // commit
      real chord = std::abs(z_new - z);
      z = z_new;
      w = w_new;
      d += delta_d + delta_d2;
      traj.points.push_back(z);
      traj.arclen.push_back(traj.arclen.back() + chord);
      traj.dvals.push_back(d);
      traj.max_drift = std::max(traj.max_drift, fabsl(level_of(d) - level));

      h *= std::clamp(opts_.angle_step / std::max(rot, opts_.angle_step / 4),
                      0.5L, 1.4L);

      // capture at a zero
      int hit = -1;
      real hit_dist = qd_.nearest_zero(z, &hit);
      if (hit >= 0 &&
          hit_dist <= opts_.capture_factor *
                          (1 + std::abs(qd_.zeros[static_cast<std::size_t>(
                                                      hit)].center)) &&
          !(hit == traj.start_zero && traj.arclen.back() < skip_start_len)) {
        finish_at_zero(traj, z, w, d, hit, hit_dist);
        return;
      }

      // escape bookkeeping: sample the direction at two radii and
      // extrapolate the O(1/r) bend away
      real r = std::abs(z);
      if (!have_r1 && r >= 5 * r_escape_) {
        have_r1 = true;
        r1 = r;
        th1 = std::arg(z);
      }
      if (have_r1 && r >= 10 * r_escape_) {
        finish_at_infinity(traj, z, r1, th1);
        return;
      }
    }
    traj.end.kind = Endpoint::Kind::Truncated;
    traj.end.reason = "step budget exhausted";
  }

  bool rk4(cplx z, cplx w, real h, cplx& z_pred, real& rot) const {
    cplx k1 = tangent(w);
    cplx ref = w;
    cplx k2, k3, k4;
    if (!stage(z + (0.5L * h) * k1, ref, k2)) return false;
    if (!stage(z + (0.5L * h) * k2, ref, k3)) return false;
    if (!stage(z + h * k3, ref, k4)) return false;
    z_pred = z + (h / 6) * (k1 + 2.0L * k2 + 2.0L * k3 + k4);
    rot = fabsl(std::arg(k4 * std::conj(k1)));
    return true;
  }

  bool stage(cplx p, cplx& ref, cplx& tau) const {
    real safety = 0;
    cplx w = sqrt_against(qd_.eval(p), ref, &safety);
    if (safety < 0.3L || std::abs(w) == 0) return false;
    ref = w;
    tau = tangent(w);
    return true;
  }

  void finish_at_zero(Trajectory& traj, cplx z, cplx w, cplx d, int hit,
                      real hit_dist) const {
    cplx center = qd_.zeros[static_cast<std::size_t>(hit)].center;
    // close the gap exactly: subtract the graded leg zero -> z
    cplx leg = graded_leg(qd_, center, std::arg(z - center),
                          std::abs(z - center), w);
    cplx d_end = d - leg * cplx{0, -1} / PI;
    traj.points.push_back(center);
    traj.arclen.push_back(traj.arclen.back() + std::abs(z - center));
    traj.dvals.push_back(d_end);
    traj.end.kind = Endpoint::Kind::ZeroHit;
    traj.end.index = hit;
    traj.end.distance = hit_dist;
  }

  void finish_at_infinity(Trajectory& traj, cplx z, real r1, real th1) const {
    real r2 = std::abs(z);
    real th2 = th1 + wrap_pi(std::arg(z) - th1);
    real measured = th2 + r1 * (th2 - th1) / (r2 - r1);
    std::vector<real> admissible = infinity_directions(qd_, ori_);
    int best = 0;
    real best_dev = 1e30L;
    for (std::size_t k = 0; k < admissible.size(); ++k) {
      real dev = fabsl(wrap_pi(measured - admissible[k]));
      if (dev < best_dev) {
        best_dev = dev;
        best = static_cast<int>(k);
      }
    }
    traj.end.kind = Endpoint::Kind::InfinityDirection;
    traj.end.index = best;
    traj.end.angle = admissible[static_cast<std::size_t>(best)];
    traj.end.deviation = best_dev;
  }

 private:
  const QuadraticDifferential& qd_;
  Orientation ori_;
  int sigma_;
  const TraceOptions& opts_;
  real scale_;
  real r_escape_;
};

}  // namespace

Trajectory trace(const QuadraticDifferential& qd, cplx start,
                 Orientation orientation, const TraceOptions& opts) {
  if (qd.nearest_zero(start) < 1e-9L * qd.scale()) {
    throw Error("trace: start point is a zero of Q; use trace_from_zero");
  }
  if (opts.branch_sign != 1 && opts.branch_sign != -1) {
    throw Error("trace: branch sign must be +1 or -1");
  }
  if (opts.direction != 1 && opts.direction != -1) {
    throw Error("trace: direction must be +1 or -1");
  }
  cplx w0 = static_cast<real>(opts.branch_sign) * std::sqrt(qd.eval(start));
  Tracer tracer(qd, orientation, opts.direction, opts);
  Trajectory traj;
  traj.start_zero = -1;
  traj.branch_seed = w0;
  traj.emanation = std::arg(tracer.tangent(w0));
  tracer.run(traj, start, w0, cplx{0, 0}, 0);
  return traj;
}

Trajectory trace_from_zero(const QuadraticDifferential& qd, int zero_index,
                           int which, Orientation orientation,
                           const TraceOptions& opts) {
  std::vector<real> angles = emanation_angles(qd, zero_index, orientation);
  if (which < 0 || which >= static_cast<int>(angles.size())) {
    throw Error("trace_from_zero: emanation index out of range");
  }
  const real psi = angles[static_cast<std::size_t>(which)];
  const cplx z0 = qd.zeros[static_cast<std::size_t>(zero_index)].center;
  const real r_seed = opts.seed_offset_factor * qd.scale();
  const cplx dir{cosl(psi), sinl(psi)};
  const cplx seed = z0 + r_seed * dir;

  // anchor the branch at the seed so the tangent points outward
  cplx w_seed = std::sqrt(qd.eval(seed));
  Tracer tracer(qd, orientation, +1, opts);
  auto outward = [&](cplx w) {
    cplx tau = tracer.tangent(w);
    return tau.real() * dir.real() + tau.imag() * dir.imag();
  };
  if (outward(w_seed) < 0) w_seed = -w_seed;
  if (outward(w_seed) < 0.7L) {
    throw Error("trace_from_zero: seed direction is not an emanation");
  }

  cplx d_seed =
      graded_leg(qd, z0, psi, r_seed, w_seed) * cplx{0, -1} / PI;

  Trajectory traj;
  traj.start_zero = zero_index;
  traj.branch_seed = w_seed;
  traj.emanation = psi;
  traj.points.push_back(z0);
  traj.arclen.push_back(0);
  traj.dvals.push_back(cplx{0, 0});
  traj.points.push_back(seed);
  traj.arclen.push_back(r_seed);
  traj.dvals.push_back(d_seed);
  tracer.run(traj, seed, w_seed, d_seed, tracer.level_of(d_seed));
  return traj;
}

ConnectionResult connection_search(const QuadraticDifferential& qd,
                                   int from_zero, int to_zero,
                                   const TraceOptions& opts) {
  ConnectionResult result;
  int count = static_cast<int>(
      emanation_angles(qd, from_zero, Orientation::Horizontal).size());
  for (int k = 0; k < count; ++k) {
    Trajectory traj =
        trace_from_zero(qd, from_zero, k, Orientation::Horizontal, opts);
    if (traj.end.kind == Endpoint::Kind::ZeroHit &&
        traj.end.index == to_zero) {
      result.found = true;
      result.emanation_index = k;
      result.trajectory = std::move(traj);
      return result;
    }
  }
  return result;
}

}  // namespace qde

#include "qde/commands.hpp"

#include "qde/artifacts.hpp"
#include "qde/ortho.hpp"
#include "qde/polyline.hpp"
#include "qde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qde {

namespace {

std::string fmt_g(real x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6Lg", x);
  return buf;
}

std::string sector_name(int j) { return "S" + std::to_string(j); }

const char* phase_name(cubic::Phase p) {
  switch (p) {
    case cubic::Phase::OneCut:
      return "OneCut";
    case cubic::Phase::Critical:
      return "Critical";
    default:
      return "TwoCut";
  }
}

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

void start_report(ReportDocument& doc, const char* command,
                  const RunConfig& cfg) {
  doc.command = command;
  doc.config_echo = cfg.echo_lines;
  doc.settings = cfg.render();
}

// the report carries the manifest, so it never lists itself
void emit_report(const ReportDocument& doc, const RunConfig& cfg,
                 const std::string& name) {
  if (!cfg.wants("json")) return;
  std::filesystem::create_directories(cfg.out_dir);
  std::string path = cfg.out_dir + "/" + name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << render_report(doc);
}

}  // namespace

real relative_drift(const Trajectory& t) {
  return t.max_drift / (1 + t.length());
}

real triangle_excursion(cplx a, cplx b, cplx c,
                        const std::vector<cplx>& pts) {
  auto cross = [](cplx u, cplx v) {
    return u.real() * v.imag() - u.imag() * v.real();
  };
  real orient = cross(b - a, c - a) >= 0 ? 1.0L : -1.0L;
  real worst = 0;
  for (cplx p : pts) {
    real e1 = -orient * cross(b - a, p - a) / std::abs(b - a);
    real e2 = -orient * cross(c - b, p - b) / std::abs(c - b);
    real e3 = -orient * cross(a - c, p - c) / std::abs(a - c);
    worst = std::max(std::max(worst, e1), std::max(e2, e3));
  }
  return worst;
}

CheckResult tail_row(const std::string& name, const Trajectory& tail,
                     int want_sector, int d) {
  bool ok = tail.end.kind == Endpoint::Kind::InfinityDirection;
  if (ok) {
    SectorId s = sector_of(d, tail.end.angle);
    ok = s.decay && s.index == want_sector;
  }
  CheckResult row = check_below(name, tail.end.deviation, 0.02L);
  row.pass = row.pass && ok;
  row.note = "escape into " + sector_name(want_sector);
  return row;
}

void equilibrium_rows(ReportDocument& doc, const QuadraticDifferential& qd,
                      const Potential& pot, const ArcMeasure& m,
                      const Trajectory& tail_in, const Trajectory& tail_out,
                      const RunConfig& cfg) {
  doc.add(check_below("measure mass deficit", m.mass - 1, 1e-6L));

  std::vector<Trajectory> tails{thinned(tail_in, 4), thinned(tail_out, 4)};
  VariationalReport var = variational_check(m, pot, tails);
  doc.add(check_below("variational deviation on the support",
                      var.on_support_deviation, 1e-4L));
  doc.add(check_above("variational margin off the support",
                      var.off_support_margin, 1e-6L));
  doc.add(check_flag("variational value grows along the tails",
                     var.tails_increasing, true));
  doc.add(check_below("transverse component of sqrt(Q) on the arc",
                      s_property_residual(qd, m), 1e-6L));

  EnergyReport en = energy(m, pot);
  doc.add(check_below("energy multiplier gap", en.consistency_gap, 1e-5L));

  // seeded spot check: the weight and the measure share the reflection
  // symmetry z -> -conj(z), so the variational field must too
  Rng rng(cfg.seed);
  real worst = 0;
  for (int i = 0; i < 6; ++i) {
    real r = rng.uniform(2.2L, 2.9L);
    real th = rng.uniform(-PI, PI);
    cplx z = std::polar(r, th);
    real here = variational_value(m, pot, z);
    real there = variational_value(m, pot, -std::conj(z));
    worst = std::max(worst, fabsl(here - there));
  }
  doc.add(check_below("sampled field reflection symmetry", worst, 1e-4L));
}

FamilySetup family_setup(const RunConfig& cfg) {
  cfg.validate();
  FamilySetup fs;
  if (cfg.family == "cubic") {
    cubic::Params p = cubic::params_from_k(cfg.coupling);
    fs.qd = cubic::build_q(p);
    fs.pot = make_cubic_potential(cfg.coupling);
    fs.tag = "cubic_K" + fmt_g(cfg.coupling);
  } else {
    quintic::Params p = quintic::closed_form_params(cfg.quintic_class);
    fs.qd = quintic::build_q(p);
    fs.pot = make_quintic_potential(cfg.quintic_class);
    fs.tag = "quintic_" + std::string(cfg.quintic_class == 1 ? "31" : "45");
  }
  return fs;
}

TraceOptions trace_options(const RunConfig& cfg) {
  TraceOptions opts;
  opts.capture_factor = cfg.capture_tol;
  return opts;
}

ReportDocument cmd_cubic(const RunConfig& cfg) {
  cfg.validate();
  ReportDocument doc;
  start_report(doc, "cubic", cfg);

  if (cfg.critical) {
    const cubic::CriticalConstants& cc = cubic::critical_constants();
    doc.add(check_near("critical volume v_star", cc.v_star,
                       3.150037074L, 1e-6L));
    doc.add(check_near("critical coupling K_star", cc.k_star,
                       1.0005424L, 1e-6L));
    doc.add(check_near("critical depth a_star", cc.a_star,
                       0.6821733958L, 1e-6L));
    doc.add(check_near("critical half-width b_star", cc.b_star,
                       1.712251710L, 1e-6L));
    doc.add(check_below("coupling identity K = 1/a - a^2",
                        cc.k_star - (1 / cc.a_star - cc.a_star * cc.a_star),
                        1e-8L));
    doc.add(check_below("axis level at the critical depth",
                        cubic::im_d_at_double_zero(cc.a_star), 1e-9L));
    emit_report(doc, cfg, "cubic_critical_report.json");
    return doc;
  }

  cubic::Params p = cubic::params_from_k(cfg.coupling);
  real b4 = p.b * p.b * p.b * p.b;
  real resid = b4 * (p.b * p.b - 2 * cfg.coupling) - 8;
  doc.add(check_below("coupling equation residual",
                      resid / (b4 * (p.b * p.b + 2 * fabsl(cfg.coupling)) + 8),
                      1e-15L));

  FamilySetup fs = family_setup(cfg);
  real qworst = 0;
  for (const auto& zc : fs.qd.zeros) {
    qworst = std::max(qworst, std::abs(fs.qd.eval(zc.center)));
  }
  doc.add(check_below("spectral polynomial at its zeros", qworst, 1e-12L));

  cubic::Phase phase = cubic::classify_phase(cfg.coupling, cfg.tie_tol);
  ConnectionResult conn = connection_search(fs.qd, 1, 2, trace_options(cfg));
  CheckResult agree = check_flag("phase agrees with the connection search",
                                 conn.found,
                                 phase != cubic::Phase::TwoCut);
  if (phase == cubic::Phase::Critical) agree.pass = true;
  agree.note = phase_name(phase);
  doc.add(agree);

  bool data = cfg.wants("csv") || cfg.wants("svg");
  if (conn.found) {
    const Trajectory& arc = conn.trajectory;
    doc.add(check_below("support arc capture distance", arc.end.distance,
                        cfg.capture_tol * (1 + fs.qd.scale())));
    Trajectory tail_in = vertical_tail_to_sector(fs.qd, 1, fs.pot.from_sector);
    Trajectory tail_out = vertical_tail_to_sector(fs.qd, 2, fs.pot.to_sector);
    doc.add(check_below("arc level drift", relative_drift(arc),
                        cfg.drift_tol));
    doc.add(check_below("tail level drift",
                        std::max(relative_drift(tail_in),
                                 relative_drift(tail_out)),
                        cfg.drift_tol));
    doc.add(tail_row("entry tail endpoint", tail_in, fs.pot.from_sector,
                     fs.qd.d));
    doc.add(tail_row("exit tail endpoint", tail_out, fs.pot.to_sector,
                     fs.qd.d));

    ArcMeasure m = density_from_q(fs.qd, arc);
    equilibrium_rows(doc, fs.qd, fs.pot, m, tail_in, tail_out, cfg);

    if (data) {
      emit_file(doc, cfg.out_dir, fs.tag + "_arc.csv", trajectory_csv(arc));
      emit_file(doc, cfg.out_dir, fs.tag + "_tail_in.csv",
                trajectory_csv(tail_in));
      emit_file(doc, cfg.out_dir, fs.tag + "_tail_out.csv",
                trajectory_csv(tail_out));
    }
    if (cfg.wants("svg")) {
      SvgFigure fig("cubic");
      fig.path(tail_in.points, "#7a7a7a", 0.014L);
      fig.path(tail_out.points, "#7a7a7a", 0.014L);
      fig.path(arc.points, "#0b4f9e", 0.022L);
      for (const auto& zc : fs.qd.zeros) {
        fig.marker(zc.center, 0.045L, "#b3261e");
      }
      emit_file(doc, cfg.out_dir, fs.tag + "_figure.svg", fig.finish());
    }
  } else {
    // no single arc: file the full horizontal critical graph instead
    std::vector<Trajectory> graph;
    for (int zero = 0; zero < static_cast<int>(fs.qd.zeros.size()); ++zero) {
      int count = static_cast<int>(
          emanation_angles(fs.qd, zero, Orientation::Horizontal).size());
      for (int k = 0; k < count; ++k) {
        graph.push_back(trace_from_zero(fs.qd, zero, k,
                                        Orientation::Horizontal,
                                        trace_options(cfg)));
      }
    }
    real worst = 0;
    int stray = 0;
    for (const Trajectory& t : graph) {
      worst = std::max(worst, relative_drift(t));
      if (t.end.kind == Endpoint::Kind::Truncated) ++stray;
    }
    doc.add(check_below("critical graph level drift", worst, cfg.drift_tol));
    doc.add(check_flag("critical graph reaches zeros or infinity",
                       stray == 0, true));
    if (data) {
      for (std::size_t i = 0; i < graph.size(); ++i) {
        emit_file(doc, cfg.out_dir,
                  fs.tag + "_graph" + std::to_string(i) + ".csv",
                  trajectory_csv(graph[i]));
      }
    }
    if (cfg.wants("svg")) {
      SvgFigure fig("cubic");
      for (const Trajectory& t : graph) {
        fig.path(t.points, "#555555", 0.014L);
      }
      for (const auto& zc : fs.qd.zeros) {
        fig.marker(zc.center, 0.045L, "#b3261e");
      }
      emit_file(doc, cfg.out_dir, fs.tag + "_figure.svg", fig.finish());
    }
  }

  emit_report(doc, cfg, fs.tag + "_report.json");
  return doc;
}

ReportDocument cmd_quintic(const RunConfig& cfg) {
  cfg.validate();
  ReportDocument doc;
  start_report(doc, "quintic", cfg);

  quintic::Params p = quintic::closed_form_params(cfg.quintic_class);
  quintic::Params q = quintic::solve_params_numeric(cfg.quintic_class);
  real gap = std::max(
      std::max(fabsl(p.a - q.a), fabsl(p.b - q.b)),
      std::max(fabsl(p.c - q.c), std::max(fabsl(p.d - q.d),
                                          fabsl(p.e - q.e))));
  doc.add(check_below("closed form vs numeric parameters", gap, 1e-9L));
  auto sys = quintic::coefficient_system_residuals(p);
  real sworst = 0;
  for (real r : sys) sworst = std::max(sworst, fabsl(r));
  doc.add(check_below("coefficient system residuals", sworst, 1e-9L));

  FamilySetup fs = family_setup(cfg);
  ConnectionResult conn = connection_search(fs.qd, 1, 2, trace_options(cfg));
  doc.add(check_flag("support arc joins the simple zeros", conn.found, true));
  if (!conn.found) {
    emit_report(doc, cfg, fs.tag + "_report.json");
    return doc;
  }

  const Trajectory& arc = conn.trajectory;
  real end_gap = std::max(std::abs(arc.points.front() - p.pair_left()),
                          std::abs(arc.points.back() - p.pair_right()));
  doc.add(check_below("arc endpoints at the simple zeros", end_gap, 1e-4L));

  quintic::TriangleReport tg = quintic::triangle_guards(p);
  doc.add(check_below("arc excursion past the guard triangle",
                      triangle_excursion(p.pair_left(), p.pair_right(),
                                         tg.apex, arc.points),
                      10 * cfg.capture_tol * (1 + fs.qd.scale())));

  Trajectory tail_in = vertical_tail_to_sector(fs.qd, 1, fs.pot.from_sector);
  Trajectory tail_out = vertical_tail_to_sector(fs.qd, 2, fs.pot.to_sector);
  doc.add(check_below("arc level drift", relative_drift(arc), cfg.drift_tol));
  doc.add(check_below("tail level drift",
                      std::max(relative_drift(tail_in),
                               relative_drift(tail_out)),
                      cfg.drift_tol));
  doc.add(tail_row("entry tail endpoint", tail_in, fs.pot.from_sector,
                   fs.qd.d));
  doc.add(tail_row("exit tail endpoint", tail_out, fs.pot.to_sector,
                   fs.qd.d));

  ArcMeasure m = density_from_q(fs.qd, arc);
  equilibrium_rows(doc, fs.qd, fs.pot, m, tail_in, tail_out, cfg);

  if (cfg.wants("csv") || cfg.wants("svg")) {
    emit_file(doc, cfg.out_dir, fs.tag + "_arc.csv", trajectory_csv(arc));
    emit_file(doc, cfg.out_dir, fs.tag + "_tail_in.csv",
              trajectory_csv(tail_in));
    emit_file(doc, cfg.out_dir, fs.tag + "_tail_out.csv",
              trajectory_csv(tail_out));
  }
  if (cfg.wants("svg")) {
    SvgFigure fig("quintic");
    fig.path(tail_in.points, "#7a7a7a", 0.014L);
    fig.path(tail_out.points, "#7a7a7a", 0.014L);
    fig.path(arc.points, "#0b4f9e", 0.022L);
    for (const auto& zc : fs.qd.zeros) {
      fig.marker(zc.center, 0.04L, "#b3261e");
    }
    emit_file(doc, cfg.out_dir, fs.tag + "_figure.svg", fig.finish());
  }

  emit_report(doc, cfg, fs.tag + "_report.json");
  return doc;
}

ReportDocument cmd_trace(const RunConfig& cfg, const TraceRequest& req) {
  cfg.validate();
  ReportDocument doc;
  start_report(doc, "trace", cfg);
  FamilySetup fs = family_setup(cfg);

  std::vector<Trajectory> pieces;
  std::string stem;
  char orient =
      req.orientation == Orientation::Horizontal ? 'h' : 'v';
  if (req.free_start) {
    TraceOptions opts = trace_options(cfg);
    opts.direction = +1;
    pieces.push_back(trace(fs.qd, req.start, req.orientation, opts));
    opts.direction = -1;
    pieces.push_back(trace(fs.qd, req.start, req.orientation, opts));
    stem = fs.tag + "_trace_free_" + orient;
  } else {
    if (req.zero < 0 || req.zero >= static_cast<int>(fs.qd.zeros.size())) {
      throw Error("zero index out of range");
    }
    int count = static_cast<int>(
        emanation_angles(fs.qd, req.zero, req.orientation).size());
    if (req.angle < 0 || req.angle >= count) {
      throw Error("emanation index out of range: zero " +
                  std::to_string(req.zero) + " has " + std::to_string(count) +
                  " directions");
    }
    pieces.push_back(trace_from_zero(fs.qd, req.zero, req.angle,
                                     req.orientation, trace_options(cfg)));
    stem = fs.tag + "_trace_z" + std::to_string(req.zero) + "_e" +
           std::to_string(req.angle) + "_" + orient;
  }

  real drift = 0;
  int stray = 0;
  for (const Trajectory& t : pieces) {
    drift = std::max(drift, relative_drift(t));
    if (t.end.kind == Endpoint::Kind::Truncated) ++stray;
  }
  doc.add(check_below("level drift", drift, cfg.drift_tol));
  doc.add(check_flag("endpoint classified", stray == 0, true));

  // one polyline through the start: the backward piece reversed, then the
  // forward piece
  std::vector<cplx> merged;
  if (pieces.size() == 2) {
    merged.assign(pieces[1].points.rbegin(), pieces[1].points.rend());
    merged.insert(merged.end(), pieces[0].points.begin() + 1,
                  pieces[0].points.end());
  } else {
    merged = pieces[0].points;
  }
  std::vector<real> arclen(merged.size(), 0);
  for (std::size_t i = 1; i < merged.size(); ++i) {
    arclen[i] = arclen[i - 1] + std::abs(merged[i] - merged[i - 1]);
  }

  if (cfg.wants("csv") || cfg.wants("svg")) {
    emit_file(doc, cfg.out_dir, stem + ".csv",
              trajectory_csv(merged, arclen));
  }
  if (cfg.wants("svg")) {
    SvgFigure fig(cfg.family);
    fig.path(merged, "#0b4f9e", 0.02L);
    for (const auto& zc : fs.qd.zeros) {
      fig.marker(zc.center, 0.04L, "#b3261e");
    }
    emit_file(doc, cfg.out_dir, stem + ".svg", fig.finish());
  }
  if (cfg.wants("json")) {
    emit_file(doc, cfg.out_dir, stem + "_endpoints.json",
              endpoints_json(pieces));
  }

  emit_report(doc, cfg, stem + "_report.json");
  return doc;
}

ReportDocument cmd_zeros(const RunConfig& cfg) {
  cfg.validate();
  ReportDocument doc;
  start_report(doc, "zeros", cfg);
  FamilySetup fs = family_setup(cfg);

  int n = cfg.degree;
  long digits = cfg.digits > 0 ? cfg.digits : default_digits(n);
  ConnectionResult conn = connection_search(fs.qd, 1, 2, trace_options(cfg));

  QuadratureContour contour =
      conn.found ? quadrature_contour(fs.qd, fs.pot, n, digits)
                 : ray_contour(fs.pot, n, digits);
  MomentTable table = moments(fs.pot, contour.points, n, 2 * n + 1, digits);
  OrthoPoly poly = hankel_solve(table, n);

  real rworst = 0;
  for (real r : poly.residuals) rworst = std::max(rworst, r);
  doc.add(check_below("orthogonality residual", rworst,
                      powl(10.0L, -static_cast<real>(digits) / 3)));

  real mirror = 0;
  for (cplx z : poly.zeros) {
    real best = 1e30L;
    for (cplx w : poly.zeros) {
      best = std::min(best, std::abs(-std::conj(z) - w));
    }
    mirror = std::max(mirror, best);
  }
  doc.add(check_below("zero set reflection symmetry", mirror, 1e-10L));

  std::vector<real> dist(poly.zeros.size(), -1);
  ZeroCloud cloud;
  if (conn.found) {
    ArcMeasure m = density_from_q(fs.qd, conn.trajectory);
    cloud = compare_to_measure(poly, m);
    dist = cloud.dist_to_arc;
    doc.add(check_flag("all zeros project onto the arc",
                       cloud.outliers.empty(), true));
    doc.add(check_below("max zero distance to the arc", cloud.max_distance,
                        0.5L));
    doc.add(check_below("Kolmogorov distance to the equilibrium law",
                        cloud.kolmogorov, 0.5L));
  } else {
    cloud.zeros = poly.zeros;
    cloud.dist_to_arc = dist;
    cloud.max_distance = -1;
    cloud.kolmogorov = -1;
    // no arc here: the cloud must split into mirror clusters instead
    real left = -1e30L, right = 1e30L;
    std::size_t nleft = 0;
    for (cplx z : poly.zeros) {
      if (z.real() < 0) {
        ++nleft;
        left = std::max(left, z.real());
      } else {
        right = std::min(right, z.real());
      }
    }
    bool balanced = nleft * 2 == poly.zeros.size();
    CheckResult split = check_flag("zeros split into two clusters",
                                   balanced, true);
    doc.add(split);
    doc.add({"cluster gap across the imaginary axis", right - left > 0.1L,
             right - left, 0.1L, "stay above tolerance"});
  }

  if (cfg.wants("csv") || cfg.wants("svg")) {
    emit_file(doc, cfg.out_dir, fs.tag + "_n" + std::to_string(n) +
              "_zeros.csv", zeros_csv(poly.zeros, dist));
    if (conn.found) {
      emit_file(doc, cfg.out_dir, fs.tag + "_n" + std::to_string(n) +
                "_arc.csv", trajectory_csv(conn.trajectory));
    }
  }
  if (cfg.wants("svg")) {
    SvgFigure fig(cfg.family);
    if (conn.found) fig.path(conn.trajectory.points, "#9db7d8", 0.02L);
    for (const auto& zc : fs.qd.zeros) {
      fig.marker(zc.center, 0.04L, "#b3261e");
    }
    for (cplx z : poly.zeros) fig.marker(z, 0.028L, "#0b4f9e");
    emit_file(doc, cfg.out_dir, fs.tag + "_n" + std::to_string(n) +
              "_overlay.svg", fig.finish());
  }
  if (cfg.wants("json")) {
    emit_file(doc, cfg.out_dir, fs.tag + "_n" + std::to_string(n) +
              "_ortho.json", ortho_json(table, poly));
    emit_file(doc, cfg.out_dir, fs.tag + "_n" + std::to_string(n) +
              "_cloud.json", cloud_json(cloud, conn.found, digits));
  }

  emit_report(doc, cfg, fs.tag + "_n" + std::to_string(n) + "_report.json");
  return doc;
}

}  // namespace qde

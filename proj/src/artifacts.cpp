#include "qde/artifacts.hpp"

#include "qde/mpc.hpp"
#include "qde/polyline.hpp"

#include "json.hpp"

#include <cstdio>
#include <sstream>

namespace qde {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_svg(real x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6Lf", x);
  return buf;
}

std::string mp_str(const mpn::Real& x, long digits) {
  return x.str(digits, std::ios_base::scientific);
}

ordered_json mp_pair(const mpn::Cplx& z, long digits) {
  ordered_json j;
  j["re"] = mp_str(z.re, digits);
  j["im"] = mp_str(z.im, digits);
  return j;
}

ordered_json full_pair(cplx z) {
  ordered_json j;
  j["re"] = fmt_full(z.real());
  j["im"] = fmt_full(z.imag());
  return j;
}

std::vector<cplx> decimate(const std::vector<cplx>& pts, std::size_t target) {
  if (pts.size() <= target) return pts;
  std::vector<cplx> out;
  std::size_t stride = pts.size() / target + 1;
  for (std::size_t i = 0; i < pts.size(); i += stride) out.push_back(pts[i]);
  if (out.back() != pts.back()) out.push_back(pts.back());
  return out;
}

const char* kind_name(Endpoint::Kind k) {
  switch (k) {
    case Endpoint::Kind::ZeroHit:
      return "zero_hit";
    case Endpoint::Kind::InfinityDirection:
      return "infinity_direction";
    default:
      return "truncated";
  }
}

}  // namespace

std::string fmt_full(real x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.21Lg", x);
  return buf;
}

std::string trajectory_csv(const std::vector<cplx>& points,
                           const std::vector<real>& arclen) {
  std::ostringstream out;
  out << "index,arclength,re,im\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << i << ',' << fmt_full(arclen[i]) << ',' << fmt_full(points[i].real())
        << ',' << fmt_full(points[i].imag()) << '\n';
  }
  return out.str();
}

std::string trajectory_csv(const Trajectory& t) {
  return trajectory_csv(t.points, t.arclen);
}

std::string zeros_csv(const std::vector<cplx>& zeros,
                      const std::vector<real>& dist_to_arc) {
  std::ostringstream out;
  out << "index,re,im,dist_to_arc\n";
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    out << i << ',' << fmt_full(zeros[i].real()) << ','
        << fmt_full(zeros[i].imag()) << ',' << fmt_full(dist_to_arc[i])
        << '\n';
  }
  return out.str();
}

SvgFigure::SvgFigure(const std::string& family) {
  // fixed frame per family, sized to the zero layout plus tail headroom
  half_ = family == "quintic" ? 2.8L : 3.2L;
}

void SvgFigure::path(const std::vector<cplx>& pts, const std::string& color,
                     real width) {
  std::vector<cplx> inside = clip_to_disk(pts, clip_radius());
  inside = decimate(inside, 700);
  if (inside.size() < 2) return;
  body_ += "<path d=\"";
  for (std::size_t i = 0; i < inside.size(); ++i) {
    body_ += i == 0 ? "M " : " L ";
    body_ += fmt_svg(inside[i].real()) + " " + fmt_svg(-inside[i].imag());
  }
  body_ += "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
           fmt_svg(width) + "\"/>\n";
}

void SvgFigure::marker(cplx z, real radius, const std::string& color) {
  if (std::abs(z) > clip_radius()) return;
  body_ += "<circle cx=\"" + fmt_svg(z.real()) + "\" cy=\"" +
           fmt_svg(-z.imag()) + "\" r=\"" + fmt_svg(radius) + "\" fill=\"" +
           color + "\"/>\n";
}

std::string SvgFigure::finish() const {
  std::string box = fmt_svg(-half_) + " " + fmt_svg(-half_) + " " +
                    fmt_svg(2 * half_) + " " + fmt_svg(2 * half_);
  std::string head =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + box +
      "\" width=\"640\" height=\"640\">\n<rect x=\"" + fmt_svg(-half_) +
      "\" y=\"" + fmt_svg(-half_) + "\" width=\"" + fmt_svg(2 * half_) +
      "\" height=\"" + fmt_svg(2 * half_) + "\" fill=\"#ffffff\"/>\n";
  return head + body_ + "</svg>\n";
}

std::string ortho_json(const MomentTable& table, const OrthoPoly& poly) {
  ordered_json j;
  j["precision"] = table.digits;
  j["weight_n"] = table.n;
  j["degree"] = poly.n;
  ordered_json moments = ordered_json::array();
  for (const mpn::Cplx& m : table.entries) {
    moments.push_back(mp_pair(m, table.digits));
  }
  j["moments"] = std::move(moments);
  ordered_json coeffs = ordered_json::array();
  for (const mpn::Cplx& c : poly.coeffs) {
    coeffs.push_back(mp_pair(c, poly.digits));
  }
  j["coefficients"] = std::move(coeffs);
  ordered_json zeros = ordered_json::array();
  for (cplx z : poly.zeros) zeros.push_back(full_pair(z));
  j["zeros"] = std::move(zeros);
  ordered_json res = ordered_json::array();
  for (real r : poly.residuals) res.push_back(static_cast<double>(r));
  j["residuals"] = std::move(res);
  return j.dump(2) + "\n";
}

std::string cloud_json(const ZeroCloud& cloud, bool has_arc, long digits) {
  ordered_json j;
  j["precision"] = digits;
  j["arc"] = has_arc;
  ordered_json zeros = ordered_json::array();
  for (std::size_t i = 0; i < cloud.zeros.size(); ++i) {
    ordered_json row = full_pair(cloud.zeros[i]);
    row["dist_to_arc"] = static_cast<double>(cloud.dist_to_arc[i]);
    zeros.push_back(std::move(row));
  }
  j["zeros"] = std::move(zeros);
  ordered_json outs = ordered_json::array();
  for (cplx z : cloud.outliers) outs.push_back(full_pair(z));
  j["outliers"] = std::move(outs);
  j["max_distance"] = static_cast<double>(cloud.max_distance);
  j["kolmogorov"] = static_cast<double>(cloud.kolmogorov);
  return j.dump(2) + "\n";
}

std::string endpoints_json(const std::vector<Trajectory>& pieces) {
  ordered_json arr = ordered_json::array();
  for (const Trajectory& t : pieces) {
    ordered_json j;
    j["kind"] = kind_name(t.end.kind);
    j["index"] = t.end.index;
    j["angle"] = static_cast<double>(t.end.angle);
    j["deviation"] = static_cast<double>(t.end.deviation);
    j["distance"] = static_cast<double>(t.end.distance);
    j["level"] = static_cast<double>(t.level);
    j["max_drift"] = static_cast<double>(t.max_drift);
    j["length"] = static_cast<double>(t.length());
    if (!t.end.reason.empty()) j["reason"] = t.end.reason;
    arr.push_back(std::move(j));
  }
  ordered_json top;
  top["endpoints"] = std::move(arr);
  return top.dump(2) + "\n";
}

}  // namespace qde

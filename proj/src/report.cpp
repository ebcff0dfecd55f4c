#include "qde/report.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qde {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

real parse_real(const std::string& key, const std::string& value) {
  errno = 0;
  char* tail = nullptr;
  real x = strtold(value.c_str(), &tail);
  if (tail == value.c_str() || *tail != '\0' || errno == ERANGE) {
    throw Error("config value for '" + key + "' is not a number: " + value);
  }
  return x;
}

long parse_long(const std::string& key, const std::string& value) {
  real x = parse_real(key, value);
  long n = static_cast<long>(x);
  if (static_cast<real>(n) != x) {
    throw Error("config value for '" + key + "' is not an integer: " + value);
  }
  return n;
}

std::vector<std::string> split_formats(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : value + ",") {
    if (ch == ',') {
      std::string f = trim(cur);
      if (!f.empty()) out.push_back(f);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string fmt_real(real x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.21Lg", x);
  return buf;
}

}  // namespace

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

std::vector<std::string> RunConfig::render() const {
  std::vector<std::string> out;
  out.push_back("family=" + family);
  if (family == "cubic") {
    out.push_back("k=" + fmt_real(coupling));
    out.push_back(std::string("critical=") + (critical ? "1" : "0"));
  } else {
    out.push_back("class=" + std::string(quintic_class == 1 ? "3,1" : "4,5"));
  }
  out.push_back("n=" + std::to_string(degree));
  out.push_back("max_n=" + std::to_string(max_degree));
  out.push_back("digits=" + std::to_string(digits));
  out.push_back("drift_tol=" + fmt_real(drift_tol));
  out.push_back("capture_tol=" + fmt_real(capture_tol));
  out.push_back("tie_tol=" + fmt_real(tie_tol));
  out.push_back("out=" + out_dir);
  std::string joined;
  for (const std::string& f : formats) {
    if (!joined.empty()) joined += ",";
    joined += f;
  }
  out.push_back("emit=" + joined);
  out.push_back("seed=" + std::to_string(seed));
  return out;
}

void RunConfig::validate() const {
  if (family != "cubic" && family != "quintic") {
    throw Error("unknown family: " + family);
  }
  if (quintic_class != 1 && quintic_class != 2) {
    throw Error("quintic class must be 3,1 or 4,5");
  }
  if (!(drift_tol > 0) || !(capture_tol > 0) || !(tie_tol > 0)) {
    throw Error("tolerances must be positive");
  }
  if (formats.empty()) throw Error("at least one output format is required");
  for (const std::string& f : formats) {
    if (f != "csv" && f != "json" && f != "svg") {
      throw Error("unknown output format: " + f);
    }
  }
  if (degree < 1 || degree > max_degree) {
    throw Error("degree must lie in 1.." + std::to_string(max_degree));
  }
  if (digits < 0) throw Error("digits must be nonnegative");
  if (out_dir.empty()) throw Error("output directory must be nonempty");
}

std::map<std::string, std::string> parse_config_lines(
    const std::string& text, std::vector<std::string>* raw) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (raw) raw->push_back(line);
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(lineno) +
                  " is not key=value: " + t);
    }
    std::string key = trim(t.substr(0, eq));
    if (key.empty()) {
      throw Error("config line " + std::to_string(lineno) + " has no key");
    }
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "family") {
    cfg.family = value;
  } else if (key == "k") {
    cfg.coupling = parse_real(key, value);
  } else if (key == "class") {
    if (value == "3,1") {
      cfg.quintic_class = 1;
    } else if (value == "4,5") {
      cfg.quintic_class = 2;
    } else {
      throw Error("quintic class must be 3,1 or 4,5");
    }
  } else if (key == "critical") {
    cfg.critical = value == "1" || value == "true";
  } else if (key == "n") {
    cfg.degree = static_cast<int>(parse_long(key, value));
  } else if (key == "max_n") {
    cfg.max_degree = static_cast<int>(parse_long(key, value));
  } else if (key == "digits") {
    cfg.digits = parse_long(key, value);
  } else if (key == "drift_tol") {
    cfg.drift_tol = parse_real(key, value);
  } else if (key == "capture_tol") {
    cfg.capture_tol = parse_real(key, value);
  } else if (key == "tie_tol") {
    cfg.tie_tol = parse_real(key, value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "emit") {
    cfg.formats = split_formats(value);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
  } else {
    throw Error("unknown config key: " + key);
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::vector<std::string> raw;
  auto entries = parse_config_lines(buf.str(), &raw);
  for (const auto& [key, value] : entries) {
    apply_config_entry(cfg, key, value);
  }
  cfg.echo_lines = std::move(raw);
}

CheckResult check_below(const std::string& name, real measured, real tol) {
  return {name, fabsl(measured) < tol, measured, tol, ""};
}

CheckResult check_above(const std::string& name, real measured, real tol) {
  return {name, measured > -tol, measured, tol, "stay above -tolerance"};
}

CheckResult check_flag(const std::string& name, bool got, bool expected) {
  return {name, got == expected, got ? 1.0L : 0.0L, 0.5L,
          expected ? "expect 1" : "expect 0"};
}

CheckResult check_near(const std::string& name, real value, real target,
                       real tol) {
  return {name, fabsl(value - target) < tol, value, tol,
          "target " + std::string(fmt_real(target))};
}

bool ReportDocument::pass() const {
  for (const CheckResult& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string render_report(const ReportDocument& doc) {
  ordered_json j;
  j["command"] = doc.command;
  j["status"] = doc.pass() ? "pass" : "fail";
  j["config_echo"] = doc.config_echo;
  j["settings"] = doc.settings;
  ordered_json rows = ordered_json::array();
  for (const CheckResult& c : doc.checks) {
    ordered_json row;
    row["name"] = c.name;
    row["status"] = c.pass ? "pass" : "fail";
    row["measured"] = static_cast<double>(c.measured);
    row["tolerance"] = static_cast<double>(c.tolerance);
    if (!c.note.empty()) row["note"] = c.note;
    rows.push_back(std::move(row));
  }
  j["checks"] = std::move(rows);
  j["manifest"] = doc.manifest;
  return j.dump(2) + "\n";
}

std::string render_report_lines(const ReportDocument& doc) {
  std::ostringstream out;
  for (const CheckResult& c : doc.checks) {
    out << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  measured "
        << static_cast<double>(c.measured) << "  tolerance "
        << static_cast<double>(c.tolerance) << "\n";
  }
  out << (doc.pass() ? "pass" : "FAIL") << "  " << doc.command << " overall\n";
  return out.str();
}

void emit_file(ReportDocument& doc, const std::string& dir,
               const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("short write to " + path);
  doc.manifest.push_back(path);
}

}  // namespace qde

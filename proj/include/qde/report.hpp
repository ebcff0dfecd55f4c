#pragma once
// Run configuration and machine-readable reports shared by all commands.
// A run is configured from three layers: built-in defaults, a line-oriented
// key=value file (path from --config or the QDE_CONFIG environment variable),
// and command-line flags, each layer overriding the previous one. A report
// collects named checks with measured values and tolerances plus the list of
// files the command wrote; it renders to JSON deterministically, so identical
// configurations produce byte-identical documents.

#include "qde/scalars.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qde {

struct RunConfig {
  std::string family = "cubic";  // "cubic" or "quintic"
  real coupling = 0;             // cubic K
  int quintic_class = 1;         // 1 for the "3,1" class, 2 for "4,5"
  bool critical = false;         // cubic: report the critical constants
  int degree = 16;               // polynomial degree for the zeros command
  int max_degree = 24;           // guard rail for the Hankel pipeline
  long digits = 0;               // moment precision; 0 picks max(50, 6n)
  real drift_tol = 1e-7L;        // relative level drift on traced curves
  real capture_tol = 1e-5L;      // zero capture radius factor for the tracer
  real tie_tol = 1e-6L;          // half-width of the critical coupling band
  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv", "json", "svg"};
  std::uint64_t seed = 20260819;

  // raw config file lines, kept verbatim for the report echo
  std::vector<std::string> echo_lines;

  bool wants(const std::string& format) const;

  // effective settings as sorted key=value pairs (echoed next to the raw
  // file lines so a report is reproducible without the file)
  std::vector<std::string> render() const;

  // throws unless tolerances are positive, formats are a nonempty subset of
  // {csv, json, svg}, and family / class / degree are in range
  void validate() const;
};

// Parses one key=value file into a map. Blank lines and lines starting with
// '#' are skipped; whitespace around keys and values is trimmed; a line
// without '=' is an error. raw (if given) receives the lines verbatim.
std::map<std::string, std::string> parse_config_lines(
    const std::string& text, std::vector<std::string>* raw = nullptr);

// Reads the file and folds its keys into cfg. Unknown keys are errors, as
// are malformed numbers. The raw lines land in cfg.echo_lines.
void apply_config_file(RunConfig& cfg, const std::string& path);

// Applies one key=value pair (shared by the file reader and flag handling).
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

struct CheckResult {
  std::string name;
  bool pass = false;
  real measured = 0;
  real tolerance = 0;
  std::string note;  // direction of the comparison when it is not "below"
};

// |measured| must stay below tol
CheckResult check_below(const std::string& name, real measured, real tol);
// measured must stay above -tol (one-sided margins)
CheckResult check_above(const std::string& name, real measured, real tol);
// boolean facts; measured records got as 1/0 against expected
CheckResult check_flag(const std::string& name, bool got, bool expected);
// value must land within tol of target; the row carries the value itself
CheckResult check_near(const std::string& name, real value, real target,
                       real tol);

struct ReportDocument {
  std::string command;
  std::vector<std::string> config_echo;  // raw config file lines, verbatim
  std::vector<std::string> settings;     // effective key=value pairs
  std::vector<CheckResult> checks;
  std::vector<std::string> manifest;     // files written, in write order

  bool pass() const;
  void add(CheckResult c) { checks.push_back(std::move(c)); }
};

// The JSON rendering of the document, key order fixed. Values that carry
// more precision than a double are decimal strings elsewhere; check rows
// are comparisons, so doubles are faithful enough here.
std::string render_report(const ReportDocument& doc);

// One "pass|FAIL name measured tolerance" line per check, for terminals.
std::string render_report_lines(const ReportDocument& doc);

// Creates the directory (and parents) if needed, writes content, and
// records the path in the manifest.
void emit_file(ReportDocument& doc, const std::string& dir,
               const std::string& name, const std::string& content);

}  // namespace qde

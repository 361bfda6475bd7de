#pragma once

// Experiment reports: versioned JSON ("unital-forge/1") and a one-line-per-check
// text form. The canonical JSON drops elapsed_ms, fingerprint, threads and
// cache_used, so runs with different settings compare byte for byte.

#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "unital_forge/error.hpp"
#include "unital_forge/onan.hpp"
#include "unital_forge/unital.hpp"

namespace uforge {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "unital-forge/1";

enum class CheckStatus { Pass, Fail, Inapplicable };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inapplicable: return "inapplicable";
  }
  return "?";
}

struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::Fail;
  std::string witness;
  double elapsed_ms = 0;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<CheckRecord> checks;
  std::string fingerprint;
  unsigned threads = 1;
  bool cache_used = false;
  Json data;  // optional payload: point sets, configurations, tables

  /// Every check that applies passes.
  bool passed() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::Fail) return false;
    return true;
  }

  void add(std::string name, bool ok, std::string witness = {}, double ms = 0) {
    checks.push_back({std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(witness), ms});
  }
  void inapplicable(std::string name, std::string why) {
    checks.push_back({std::move(name), CheckStatus::Inapplicable, std::move(why), 0});
  }
};

/// Compiler and language level of this build.
inline std::string toolchain_fingerprint() {
  std::ostringstream os;
#if defined(__clang__)
  os << "clang " << __clang_major__ << "." << __clang_minor__ << "." << __clang_patchlevel__;
#elif defined(__GNUC__)
  os << "gcc " << __GNUC__ << "." << __GNUC_MINOR__ << "." << __GNUC_PATCHLEVEL__;
#else
  os << "unknown-compiler";
#endif
  os << " c++" << __cplusplus;
#ifdef NDEBUG
  os << " release";
#else
  os << " debug";
#endif
  return os.str();
}

inline Json to_json(const ExperimentReport& r, bool canonical = false) {
  Json j;
  j["schema"] = kReportSchema;
  j["experiment"] = r.experiment;
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["parameters"] = params;
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json x;
    x["name"] = c.name;
    x["status"] = to_string(c.status);
    x["witness"] = c.witness;
    if (!canonical) x["elapsed_ms"] = c.elapsed_ms;
    checks.push_back(std::move(x));
  }
  j["checks"] = std::move(checks);
  j["passed"] = r.passed();
  if (!r.data.is_null()) j["data"] = r.data;
  j["threads"] = r.threads;
  j["cache_used"] = r.cache_used;
  if (!canonical) j["fingerprint"] = r.fingerprint;
  return j;
}

/// Comparison form of a report document: no timings, fingerprint, thread
/// count or cache flag.
inline std::string canonical_json(Json j) {
  j.erase("fingerprint");
  j.erase("threads");
  j.erase("cache_used");
  if (j.contains("checks"))
    for (auto& c : j["checks"]) c.erase("elapsed_ms");
  return j.dump();
}

inline std::string canonical_json(const ExperimentReport& r) { return canonical_json(to_json(r, true)); }

inline std::string render_text(const ExperimentReport& r) {
  std::ostringstream os;
  os << "experiment " << r.experiment;
  for (const auto& [k, v] : r.params) os << " " << k << "=" << v;
  os << "\n";
  for (const auto& c : r.checks) {
    const char* tag = c.status == CheckStatus::Pass ? "PASS" : c.status == CheckStatus::Fail ? "FAIL" : "N/A ";
    os << tag << " " << c.name;
    if (!c.witness.empty()) os << "  [" << c.witness << "]";
    os << "\n";
  }
  os << (r.passed() ? "RESULT pass" : "RESULT fail") << "\n";
  return os.str();
}

enum class ReportFormat { Json, Text };

inline ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "text") return ReportFormat::Text;
  fail(ErrorKind::InvalidParameters, "unknown report format '" + s + "' (json or text)");
}

inline void report_write(const ExperimentReport& r, ReportFormat fmt, std::ostream& os) {
  if (fmt == ReportFormat::Json) os << to_json(r).dump(2) << "\n";
  else os << render_text(r);
  if (!os) fail(ErrorKind::IoFailure, "write failed");
}

inline void report_write(const ExperimentReport& r, ReportFormat fmt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoFailure, "cannot open " + path);
  report_write(r, fmt, out);
}

// ---------------------------------------------------------------------------
// Geometry to JSON.

/// Homogeneous triple with rendered field entries.
inline Json point_json(const Plane& pl, PointId id) {
  const Field& f = pl.field();
  const Point P = pl.point(id);
  switch (P.kind) {
    case PointKind::Affine: return Json::array({f.render(P.x), f.render(P.y), "1"});
    case PointKind::Infinite: return Json::array({"1", f.render(P.y), "0"});
    case PointKind::Vertex: return Json::array({"0", "1", "0"});
  }
  return Json();
}

inline Json point_set_json(const PointSet& s) {
  Json j;
  j["q"] = s.q;
  j["family"] = s.family;
  Json params = Json::object();
  for (const auto& [k, v] : s.params) params[k] = v;
  j["params"] = params;
  Json pts = Json::array();
  for (PointId p : s.points) pts.push_back(point_json(*s.plane, p));
  j["points"] = std::move(pts);
  return j;
}

inline Json onan_json(const Plane& pl, const OnanConfig& c) {
  Json j;
  Json lines = Json::array(), pts = Json::array();
  for (LineId l : c.lines) lines.push_back(pl.render_line(l));
  for (PointId p : c.points) pts.push_back(point_json(pl, p));
  j["lines"] = std::move(lines);
  j["points"] = std::move(pts);
  return j;
}

/// Compact one-line witness for a configuration.
inline std::string onan_witness(const Plane& pl, const OnanConfig& c) {
  std::string s;
  for (PointId p : c.points) s += (s.empty() ? "" : " ") + pl.render_point(p);
  s += " |";
  for (LineId l : c.lines) s += " " + pl.render_line(l);
  return s;
}

}  // namespace uforge

#pragma once

#include <json.hpp>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kloverify/modp.hpp"
#include "kloverify/quadint.hpp"

namespace klv {

constexpr int kCacheSchemaVersion = 1;

struct TraceRow {
  i64 k = 0;
  i64 points = 0;
  i64 trace = 0;
  i64 eps = 0;
};

struct Verdict {
  bool ok = false;
  std::string detail;
};

// Everything `verify` establishes for a single prime.  Moments are indexed
// by n (moments[1] = V_1, ..., moments[6] = V_6); verdicts keep insertion
// order so serialized output is stable.
struct MomentReport {
  i64 p = 0;
  std::vector<BigInt> moments;
  BigInt a_p = 0, b_p = 0;
  bool a_valid = false, b_valid = false;
  std::vector<TraceRow> traces;
  std::vector<std::pair<std::string, Verdict>> verdicts;
  std::vector<std::pair<std::string, double>> timings_ms;

  void add_verdict(std::string name, bool ok, std::string detail = "") {
    verdicts.emplace_back(std::move(name), Verdict{ok, std::move(detail)});
  }

  bool all_ok() const {
    for (const auto& [name, v] : verdicts)
      if (!v.ok) return false;
    return true;
  }

  const Verdict* find(const std::string& name) const {
    for (const auto& [n, v] : verdicts)
      if (n == name) return &v;
    return nullptr;
  }

  std::string first_failure() const {
    for (const auto& [name, v] : verdicts)
      if (!v.ok) return name;
    return {};
  }
};

// One JSON object per prime.  Timings are deliberately optional: with them
// goes in the cache file, without them the output of a rerun is
// byte-identical.
inline nlohmann::ordered_json report_to_json(const MomentReport& r, bool include_timings) {
  nlohmann::ordered_json j;
  j["v"] = kCacheSchemaVersion;
  j["p"] = r.p;
  auto& moments = j["moments"] = nlohmann::ordered_json::array();
  for (std::size_t n = 1; n < r.moments.size(); ++n) moments.push_back(r.moments[n].str());
  auto& traces = j["traces"] = nlohmann::ordered_json::array();
  for (const auto& t : r.traces) traces.push_back({t.k, t.points, t.trace, t.eps});
  auto& verdicts = j["verdicts"] = nlohmann::ordered_json::object();
  for (const auto& [name, v] : r.verdicts) verdicts[name] = v.ok;
  if (r.a_valid) j["a_p"] = r.a_p.str();
  if (r.b_valid) j["b_p"] = r.b_p.str();
  if (include_timings) {
    auto& t = j["timings_ms"] = nlohmann::ordered_json::object();
    for (const auto& [name, ms] : r.timings_ms) t[name] = ms;
  }
  return j;
}

inline std::string report_csv_header() {
  return "p,V1,V2,V3,V4,V5,V6,a_p,b_p,all_pass,failed_checks";
}

inline std::string report_to_csv(const MomentReport& r) {
  std::ostringstream os;
  os << r.p;
  for (std::size_t n = 1; n <= 6; ++n) os << ',' << (n < r.moments.size() ? r.moments[n].str() : "");
  os << ',' << (r.a_valid ? r.a_p.str() : "") << ',' << (r.b_valid ? r.b_p.str() : "");
  os << ',' << (r.all_ok() ? 1 : 0) << ',';
  bool first = true;
  for (const auto& [name, v] : r.verdicts)
    if (!v.ok) {
      if (!first) os << ';';
      os << name;
      first = false;
    }
  return os.str();
}

}  // namespace klv

#pragma once

#include <ctime>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "modlie/gen.hpp"
#include "modlie/liealg.hpp"

namespace modlie {

using nlohmann::json;

inline json field_to_json(const Fq& F) {
  return json{{"p", F.p()}, {"k", F.k()}, {"modulus", F.modulus()}};
}

inline Fq field_from_json(const json& j) {
  return Fq::with_modulus(j.at("p").get<std::uint32_t>(),
                          j.at("modulus").get<std::vector<std::uint32_t>>());
}

inline json vec_to_json(const Vec& v) {
  json a = json::array();
  for (FqElem e : v) a.push_back(e.v);
  return a;
}

inline Vec vec_from_json(const json& j) {
  Vec v;
  for (const auto& e : j) v.push_back(FqElem{e.get<std::uint64_t>()});
  return v;
}

/// Algebra snapshot: labels, grading, and the structure constants of all
/// pairs i < j. Rebuilding through the constructor re-runs its validation.
inline json algebra_to_json(const LieAlgebra& L) {
  json sc = json::array();
  for (int i = 0; i < L.dim(); ++i)
    for (int j = i + 1; j < L.dim(); ++j) {
      json entries = json::array();
      L.for_pair(i, j, [&](int k, std::int64_t c) { entries.push_back({k, c}); });
      if (!entries.empty()) sc.push_back({i, j, entries});
    }
  json out{{"schema", "modlie-algebra-v1"},
           {"name", L.name()},
           {"field", field_to_json(L.field())},
           {"dim", L.dim()},
           {"labels", L.labels()},
           {"sc", sc}};
  if (L.graded()) out["grading"] = L.degrees();
  return out;
}

inline LieAlgebra algebra_from_json(const json& j) {
  check(j.at("schema") == "modlie-algebra-v1", "SpecMismatch", "unknown algebra schema");
  Fq F = field_from_json(j.at("field"));
  int dim = j.at("dim").get<int>();
  LieAlgebraBuilder b(F, dim);
  b.set_name(j.at("name").get<std::string>());
  const auto& labels = j.at("labels");
  for (int i = 0; i < dim; ++i)
    b.set_label(i, labels.at(static_cast<std::size_t>(i)).get<std::string>());
  if (j.contains("grading")) {
    const auto& deg = j.at("grading");
    for (int i = 0; i < dim; ++i) b.set_degree(i, deg.at(static_cast<std::size_t>(i)).get<int>());
  }
  for (const auto& row : j.at("sc")) {
    int a = row.at(0).get<int>(), bidx = row.at(1).get<int>();
    for (const auto& e : row.at(2))
      b.add(a, bidx, e.at(0).get<int>(), e.at(1).get<std::int64_t>());
  }
  return b.build();
}

inline json certificate_to_json(const PairCertificate& c) {
  return json{{"algebra", c.algebra}, {"p", c.p},
              {"k", c.field_k},       {"x", vec_to_json(c.x)},
              {"y", vec_to_json(c.y)}, {"closure_dim", c.closure_dim},
              {"method", c.method},   {"seed", c.seed}};
}

inline PairCertificate certificate_from_json(const json& j) {
  PairCertificate c;
  c.algebra = j.at("algebra").get<std::string>();
  c.p = j.at("p").get<std::uint32_t>();
  c.field_k = j.at("k").get<std::uint32_t>();
  c.x = vec_from_json(j.at("x"));
  c.y = vec_from_json(j.at("y"));
  c.closure_dim = j.at("closure_dim").get<int>();
  c.method = j.at("method").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

inline json census_to_json(const StrataCensus& c) {
  json h = json::object();
  for (const auto& [d, n] : c.histogram) h[std::to_string(d)] = n;
  return json{{"algebra", c.algebra}, {"plan", c.plan}, {"total", c.total}, {"histogram", h}};
}

inline void report_add_assertion(json& report, const std::string& name, bool pass,
                                 const std::string& detail = "") {
  report["assertions"].push_back(json{{"name", name}, {"pass", pass}, {"detail", detail}});
}

inline bool report_all_pass(const json& report) {
  for (const auto& a : report.at("assertions"))
    if (!a.at("pass").get<bool>()) return false;
  return true;
}

/// Report skeleton; experiment code fills certificates, histograms, and
/// assertions, then finalize_report seals it.
inline json make_report(const std::string& algebra, const Fq& F, const std::string& experiment,
                        const json& parameters) {
  return json{{"schema_version", 1},
              {"algebra", algebra},
              {"field", field_to_json(F)},
              {"experiment", experiment},
              {"parameters", parameters},
              {"certificates", json::array()},
              {"histograms", json::object()},
              {"assertions", json::array()}};
}

/// Hash of everything except the "meta" block, so timestamps and host info
/// never perturb comparisons across runs.
inline std::string report_hash(const json& report) {
  json body = report;
  body.erase("meta");
  return hex64(fnv1a64(body.dump()));
}

inline void finalize_report(json& report) {
  report.erase("meta");
  std::string hash = report_hash(report);
  char stamp[32] = {0};
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  report["meta"] = json{{"generated_at", stamp}, {"hash", hash}};
}

/// Appends one report per line; existing content is never rewritten.
inline void append_report(const std::string& path, const json& report) {
  std::ofstream out(path, std::ios::app);
  check(out.good(), "SpecMismatch", "cannot open report file " + path);
  out << report.dump() << "\n";
}

inline std::vector<json> load_reports(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), "SpecMismatch", "cannot read report file " + path);
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

}  // namespace modlie

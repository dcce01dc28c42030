#pragma once

#include <json.hpp>

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gkzcc/conormal.hpp"
#include "gkzcc/cycle.hpp"
#include "gkzcc/divisor.hpp"
#include "gkzcc/fan.hpp"
#include "gkzcc/matrix_core.hpp"

namespace gkzcc {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Json int_to_json(const Int& x) {
  static const Int lo = std::numeric_limits<std::int64_t>::min();
  static const Int hi = std::numeric_limits<std::int64_t>::max();
  if (x >= lo && x <= hi) return static_cast<std::int64_t>(x);
  return x.str();
}

inline Int int_from_json(const Json& j) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw ParseError("expected an integer (number or decimal string)");
}

inline Json matrix_to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline IntMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows");
  std::vector<std::vector<Int>> rows;
  for (const auto& r : j) {
    if (!r.is_array() || r.empty()) throw ParseError("matrix rows must be nonempty arrays");
    std::vector<Int> row;
    for (const auto& x : r) row.push_back(int_from_json(x));
    rows.push_back(std::move(row));
  }
  return IntMatrix(rows);
}

inline Json theta_to_json(const ThetaSubset& t) {
  Json a = Json::array();
  for (int j : t.members) a.push_back(j);
  return a;
}

inline ThetaSubset theta_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("theta must be an array of column indices");
  std::vector<int> m;
  for (const auto& x : j) m.push_back(x.get<int>());
  return ThetaSubset(std::move(m));
}

inline Json character_to_json(const CharacterVector& chi) {
  Json j;
  j["order"] = int_to_json(chi.order);
  Json exps = Json::array();
  for (const auto& e : chi.exponents) exps.push_back(int_to_json(e));
  j["exponents"] = std::move(exps);
  return j;
}

inline CharacterVector character_from_json(const Json& j) {
  if (!j.contains("order") || !j.contains("exponents"))
    throw ParseError("character needs {order, exponents}");
  std::vector<Int> exps;
  for (const auto& e : j["exponents"]) exps.push_back(int_from_json(e));
  return CharacterVector(int_from_json(j["order"]), std::move(exps));
}

inline Json edge_to_json(const Edge& e) {
  Json a = Json::array();
  for (const auto& x : e.v) a.push_back(int_to_json(x));
  return a;
}

inline Edge edge_from_json(const Json& j) {
  std::vector<Int> v;
  for (const auto& x : j) v.push_back(int_from_json(x));
  return Edge(std::move(v));
}

inline Json cone_to_json(const Cone& c) {
  Json a = Json::array();
  for (const auto& e : c.edges()) a.push_back(edge_to_json(e));
  return a;
}

inline Cone cone_from_json(const Json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j) edges.push_back(edge_from_json(e));
  return Cone(std::move(edges));
}

inline Json fan_to_json(const GenerableSet& s) {
  Json j;
  j["d"] = s.dim();
  Json cones = Json::array();
  for (const auto& c : s.cones()) cones.push_back(cone_to_json(c));
  j["cones"] = std::move(cones);
  return j;
}

inline GenerableSet fan_from_json(const Json& j) {
  if (!j.contains("d") || !j.contains("cones"))
    throw ParseError("fan needs {d, cones}");
  std::vector<Cone> cones;
  for (const auto& c : j["cones"]) cones.push_back(cone_from_json(c));
  GenerableSet s = GenerableSet::checked(std::move(cones));
  if (s.dim() != j["d"].get<std::size_t>())
    throw ParseError("fan dimension field disagrees with its cones");
  return s;
}

inline Json blowup_record_to_json(const BlowupRecord& r) {
  Json j;
  j["eps1"] = edge_to_json(r.eps1);
  j["eps2"] = edge_to_json(r.eps2);
  j["eps_ex"] = edge_to_json(r.eps_ex);
  Json repl = Json::array(), created = Json::array();
  for (const auto& c : r.replaced) repl.push_back(cone_to_json(c));
  for (const auto& c : r.created) created.push_back(cone_to_json(c));
  j["replaced"] = std::move(repl);
  j["created"] = std::move(created);
  return j;
}

inline Json epsilon_to_json(const EpsilonSet& e) {
  Json a = Json::array();
  for (const auto& m : e.members) a.push_back(edge_to_json(m));
  return a;
}

inline Json conormal_label_to_json(const ConormalLabel& l) {
  Json j;
  j["kind"] = conormal_kind_name(l.kind);
  j["epsilon"] = epsilon_to_json(l.eps);
  return j;
}

inline Json support_label_to_json(const SupportLabel& l) {
  Json j;
  j["kind"] = support_kind_name(l.kind);
  if (l.theta) j["theta"] = theta_to_json(*l.theta);
  Json prov = Json::array();
  for (const auto& [eps, cone] : l.provenance) {
    Json p;
    p["epsilon"] = epsilon_to_json(eps);
    p["cone"] = cone_to_json(cone);
    prov.push_back(std::move(p));
  }
  j["provenance"] = std::move(prov);
  return j;
}

inline Json cycle_to_json(const Cycle& c) {
  Json j;
  j["sign_exp"] = int_to_json(c.sign_exponent);
  Json comps = Json::array();
  for (const auto& comp : c.components) {
    Json cj;
    cj["kind"] = cycle_kind_name(comp.kind);
    if (comp.theta) cj["theta"] = theta_to_json(*comp.theta);
    if (comp.multiplicity)
      cj["mult"] = int_to_json(*comp.multiplicity);
    else
      cj["mult"] = comp.mult_str();
    cj["field"] = comp.field == FieldTag::Char0 ? "char0" : "charp";
    comps.push_back(std::move(cj));
  }
  j["components"] = std::move(comps);
  return j;
}

inline Cycle cycle_from_json(const Json& j) {
  Cycle c;
  c.sign_exponent = int_from_json(j.at("sign_exp"));
  for (const auto& cj : j.at("components")) {
    CycleComponent comp;
    const std::string kind = cj.at("kind").get<std::string>();
    if (kind == "zero-section") comp.kind = CycleKind::ZeroSection;
    else if (kind == "infinity-conormal") comp.kind = CycleKind::InfinityConormal;
    else if (kind == "umbrella-stratum") comp.kind = CycleKind::UmbrellaStratum;
    else if (kind == "resolved-support") comp.kind = CycleKind::ResolvedSupport;
    else if (kind == "resolved-support-infinity")
      comp.kind = CycleKind::ResolvedSupportInfinity;
    else throw ParseError("unknown cycle component kind: " + kind);
    if (cj.contains("theta")) comp.theta = theta_from_json(cj["theta"]);
    if (cj.at("mult").is_string()) comp.multiplicity.reset();
    else comp.multiplicity = int_from_json(cj["mult"]);
    comp.field = cj.at("field").get<std::string>() == "char0" ? FieldTag::Char0
                                                              : FieldTag::CharP;
    c.components.push_back(std::move(comp));
  }
  return c;
}

inline Json multiplicity_table_to_json(const MultiplicityTable& t) {
  Json a = Json::array();
  for (const auto& [theta, m] : t.entries) {
    Json e;
    e["theta"] = theta_to_json(theta);
    e["m"] = int_to_json(m);
    a.push_back(std::move(e));
  }
  return a;
}

inline MultiplicityTable multiplicity_table_from_json(const Json& j) {
  MultiplicityTable t;
  if (!j.is_array()) throw ParseError("multiplicity table must be an array");
  for (const auto& e : j)
    t.entries[theta_from_json(e.at("theta"))] = int_from_json(e.at("m"));
  return t;
}

inline Json dim_report_to_json(const DimReport& r) {
  Json j;
  j["theta"] = theta_to_json(r.theta);
  j["chart"] = r.chart;
  j["r"] = r.r;
  if (r.r_p) j["r_p"] = *r.r_p;
  j["dim_lower"] = int_to_json(r.dim_lower);
  j["dim_upper"] = int_to_json(r.dim_upper);
  if (r.dim_exact) j["dim_exact"] = int_to_json(*r.dim_exact);
  if (r.r_p) {
    j["pivots_mod_p"] = r.pivots_mod_p;
    j["pivots_rational_ext"] = r.pivots_rational_ext;
  }
  return j;
}

inline Json generator_set_to_json(const GeneratorSet& g) {
  Json j;
  j["chart"] = g.chart;
  j["family"] = generator_family_name(g.family);
  j["generators"] = g.rendered();
  return j;
}

inline Json transcript_to_json(const ReductionTranscript& t) {
  Json j;
  j["prime"] = int_to_json(t.prime);
  j["initial"] = matrix_to_json(t.initial);
  j["final"] = matrix_to_json(t.final_matrix);
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json sj;
    sj["p"] = matrix_to_json(s.p);
    sj["divided_row"] = s.divided_row + 1;  // 1-based in the interchange format
    steps.push_back(std::move(sj));
  }
  j["steps"] = std::move(steps);
  return j;
}

inline Json resolve_log_to_json(const std::vector<ResolveStepLog>& log) {
  Json a = Json::array();
  for (const auto& s : log) {
    Json j;
    j["pair"] = {s.col_i, s.col_j};
    j["eps1"] = edge_to_json(s.eps1);
    j["eps2"] = edge_to_json(s.eps2);
    j["mu_before"] = int_to_json(s.mu_before);
    j["nu_before"] = int_to_json(s.nu_before);
    j["mu_after"] = int_to_json(s.mu_after);
    j["nu_after"] = int_to_json(s.nu_after);
    a.push_back(std::move(j));
  }
  return a;
}

}  // namespace gkzcc

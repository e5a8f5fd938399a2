#include "hopfren/theory.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hopfren {

using nlohmann::json;

std::string to_string(CorollaClass c) {
  switch (c) {
    case CorollaClass::SuperRenormalizable: return "super-renormalizable";
    case CorollaClass::Renormalizable: return "renormalizable";
    case CorollaClass::NonRenormalizable: return "non-renormalizable";
  }
  return "?";
}

Amplitude Amplitude::of_vertex(const TheorySpec& theory, int vertex_index) {
  Amplitude a;
  for (int e : theory.vertices.at(vertex_index).legs)
    a.legs.emplace_back(e, 0);
  std::sort(a.legs.begin(), a.legs.end());
  return a;
}

Amplitude Amplitude::of_edge(const TheorySpec& theory, int edge_index) {
  Amplitude a;
  if (theory.edges.at(edge_index).oriented) {
    a.legs.emplace_back(edge_index, -1);
    a.legs.emplace_back(edge_index, +1);
  } else {
    a.legs.emplace_back(edge_index, 0);
    a.legs.emplace_back(edge_index, 0);
  }
  std::sort(a.legs.begin(), a.legs.end());
  return a;
}

void TheorySpec::build_lookups() const {
  if (!edge_lookup_.empty() || !vertex_lookup_.empty()) return;
  for (int i = 0; i < int(edges.size()); ++i) edge_lookup_[edges[i].name] = i;
  for (int i = 0; i < int(vertices.size()); ++i) vertex_lookup_[vertices[i].name] = i;
  for (int i = 0; i < int(couplings.size()); ++i) coupling_lookup_[couplings[i]] = i;
}

int TheorySpec::edge_index(const std::string& name) const {
  build_lookups();
  auto it = edge_lookup_.find(name);
  if (it == edge_lookup_.end())
    fail(ErrorCode::SemanticError, "unknown edge residue '" + name + "'");
  return it->second;
}

int TheorySpec::vertex_index(const std::string& name) const {
  build_lookups();
  auto it = vertex_lookup_.find(name);
  if (it == vertex_lookup_.end())
    fail(ErrorCode::SemanticError, "unknown vertex residue '" + name + "'");
  return it->second;
}

int TheorySpec::coupling_index(const std::string& name) const {
  build_lookups();
  auto it = coupling_lookup_.find(name);
  if (it == coupling_lookup_.end())
    fail(ErrorCode::SemanticError, "unknown coupling '" + name + "'");
  return it->second;
}

std::vector<int> TheorySpec::vertex_residues_with_legs(const std::vector<int>& legs) const {
  std::vector<int> sorted = legs;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> out;
  for (int i = 0; i < int(vertices.size()); ++i)
    if (vertices[i].legs == sorted) out.push_back(i);
  return out;
}

AmplitudeInfo TheorySpec::classify_amplitude(const Amplitude& amplitude) const {
  AmplitudeInfo info;
  info.amplitude = amplitude;

  if (amplitude.size() == 2) {
    const auto& l0 = amplitude.legs[0];
    const auto& l1 = amplitude.legs[1];
    if (l0.first == l1.first) {
      const EdgeResidue& e = edges.at(l0.first);
      bool match = e.oriented ? (l0.second + l1.second == 0 && l0.second != 0)
                              : (l0.second == 0 && l1.second == 0);
      if (match) {
        info.kind = Amplitude::Kind::Edge;
        info.residue_index = l0.first;
        return info;
      }
    }
  }
  std::vector<int> legs;
  legs.reserve(amplitude.legs.size());
  for (const auto& [e, dir] : amplitude.legs) legs.push_back(e);
  auto matches = vertex_residues_with_legs(legs);
  if (!matches.empty()) {
    info.kind = Amplitude::Kind::Vertex;
    info.residue_index = matches.front();
    return info;
  }
  info.kind = Amplitude::Kind::PureQuantum;
  return info;
}

std::string TheorySpec::to_json() const {
  json j;
  j["dimension"] = dimension;
  j["edges"] = json::array();
  for (const auto& e : edges)
    j["edges"].push_back({{"name", e.name}, {"weight", e.weight}, {"oriented", e.oriented}});
  j["vertices"] = json::array();
  for (const auto& v : vertices) {
    json jv;
    jv["name"] = v.name;
    jv["weight"] = v.weight;
    jv["legs"] = json::array();
    for (int e : v.legs) jv["legs"].push_back(edges.at(e).name);
    json cpl = json::object();
    for (int c = 0; c < int(couplings.size()); ++c)
      if (v.coupling_exponents[c] != 0) cpl[couplings[c]] = v.coupling_exponents[c];
    jv["coupling"] = cpl;
    j["vertices"].push_back(jv);
  }
  j["couplings"] = couplings;
  j["qgs"] = json::array();
  for (const auto& r : qgs_relations)
    j["qgs"].push_back({{"v", vertices.at(r.v).name},
                        {"m", r.m},
                        {"w", vertices.at(r.w).name},
                        {"n", r.n}});
  return j.dump(2);
}

std::uint64_t TheorySpec::content_hash() const {
  std::string s = to_json();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& msg) {
  fail(ErrorCode::ParseError, path.empty() ? msg : path + ": " + msg);
}

void require_fields(const json& j, const std::string& where,
                    const std::set<std::string>& allowed) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      parse_fail(where, "unknown field '" + it.key() + "'");
}

int get_int(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key)) parse_fail(where, "missing field '" + key + "'");
  if (!j[key].is_number_integer())
    parse_fail(where + "." + key, "expected an integer");
  return j[key].get<int>();
}

std::string get_string(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key)) parse_fail(where, "missing field '" + key + "'");
  if (!j[key].is_string()) parse_fail(where + "." + key, "expected a string");
  return j[key].get<std::string>();
}

} // namespace

TheorySpec load_theory(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }

  require_fields(j, "$", {"dimension", "edges", "vertices", "couplings", "qgs"});

  TheorySpec t;
  t.dimension = get_int(j, "$", "dimension");
  if (t.dimension < 1)
    fail(ErrorCode::SemanticError, "$.dimension: must be >= 1");

  if (!j.contains("edges") || !j["edges"].is_array())
    parse_fail("$.edges", "expected an array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < j["edges"].size(); ++i) {
    const std::string where = "$.edges[" + std::to_string(i) + "]";
    const json& je = j["edges"][i];
    require_fields(je, where, {"name", "weight", "oriented"});
    EdgeResidue e;
    e.name = get_string(je, where, "name");
    e.weight = get_int(je, where, "weight");
    if (je.contains("oriented")) {
      if (!je["oriented"].is_boolean()) parse_fail(where + ".oriented", "expected a boolean");
      e.oriented = je["oriented"].get<bool>();
    }
    if (!names.insert(e.name).second)
      fail(ErrorCode::SemanticError, where + ": duplicate residue name '" + e.name + "'");
    t.edges.push_back(e);
  }

  if (!j.contains("couplings") || !j["couplings"].is_array())
    parse_fail("$.couplings", "expected an array");
  std::set<std::string> coupling_names;
  for (std::size_t i = 0; i < j["couplings"].size(); ++i) {
    if (!j["couplings"][i].is_string())
      parse_fail("$.couplings[" + std::to_string(i) + "]", "expected a string");
    std::string name = j["couplings"][i].get<std::string>();
    if (!coupling_names.insert(name).second)
      fail(ErrorCode::SemanticError, "$.couplings: duplicate coupling '" + name + "'");
    t.couplings.push_back(name);
  }

  if (!j.contains("vertices") || !j["vertices"].is_array())
    parse_fail("$.vertices", "expected an array");
  for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
    const std::string where = "$.vertices[" + std::to_string(i) + "]";
    const json& jv = j["vertices"][i];
    require_fields(jv, where, {"name", "weight", "legs", "coupling"});
    VertexResidue v;
    v.name = get_string(jv, where, "name");
    v.weight = get_int(jv, where, "weight");
    if (names.count(v.name))
      fail(ErrorCode::SemanticError, where + ": name '" + v.name +
                                         "' collides with another residue");
    names.insert(v.name);
    if (!jv.contains("legs") || !jv["legs"].is_array() || jv["legs"].empty())
      parse_fail(where + ".legs", "expected a non-empty array of edge names");
    for (const auto& jl : jv["legs"]) {
      if (!jl.is_string()) parse_fail(where + ".legs", "expected edge names");
      std::string leg = jl.get<std::string>();
      auto it = std::find_if(t.edges.begin(), t.edges.end(),
                             [&](const EdgeResidue& e) { return e.name == leg; });
      if (it == t.edges.end())
        fail(ErrorCode::SemanticError,
             where + ".legs: undeclared edge residue '" + leg + "'");
      v.legs.push_back(int(it - t.edges.begin()));
    }
    std::sort(v.legs.begin(), v.legs.end());
    v.coupling_exponents.assign(t.couplings.size(), 0);
    if (!jv.contains("coupling") || !jv["coupling"].is_object())
      parse_fail(where + ".coupling", "expected an object of coupling exponents");
    for (auto it = jv["coupling"].begin(); it != jv["coupling"].end(); ++it) {
      auto cit = std::find(t.couplings.begin(), t.couplings.end(), it.key());
      if (cit == t.couplings.end())
        fail(ErrorCode::SemanticError,
             where + ".coupling: undeclared coupling '" + it.key() + "'");
      if (!it.value().is_number_integer() || it.value().get<int>() < 0)
        parse_fail(where + ".coupling." + it.key(), "expected a non-negative integer");
      v.coupling_exponents[cit - t.couplings.begin()] = it.value().get<int>();
    }
    if (std::all_of(v.coupling_exponents.begin(), v.coupling_exponents.end(),
                    [](int e) { return e == 0; }))
      fail(ErrorCode::SemanticError,
           where + ".coupling: vertex residue needs a non-trivial coupling monomial");
    t.vertices.push_back(v);
  }

  for (int c = 0; c < int(t.couplings.size()); ++c) {
    bool used = std::any_of(t.vertices.begin(), t.vertices.end(),
                            [&](const VertexResidue& v) { return v.coupling_exponents[c] > 0; });
    if (!used)
      fail(ErrorCode::SemanticError,
           "$.couplings: coupling '" + t.couplings[c] + "' not used by any vertex");
  }

  if (j.contains("qgs")) {
    if (!j["qgs"].is_array()) parse_fail("$.qgs", "expected an array");
    for (std::size_t i = 0; i < j["qgs"].size(); ++i) {
      const std::string where = "$.qgs[" + std::to_string(i) + "]";
      const json& jr = j["qgs"][i];
      require_fields(jr, where, {"v", "m", "w", "n"});
      QgsRelation r;
      r.v = t.vertex_index(get_string(jr, where, "v"));
      r.w = t.vertex_index(get_string(jr, where, "w"));
      r.m = get_int(jr, where, "m");
      r.n = get_int(jr, where, "n");
      if (r.m < 1 || r.n < 1)
        fail(ErrorCode::SemanticError, where + ": powers must be positive");
      if (r.v == r.w && r.m == r.n)
        fail(ErrorCode::SemanticError, where + ": relation is trivial");
      for (int c = 0; c < int(t.couplings.size()); ++c) {
        long lhs = long(r.m) * t.vertices[r.v].coupling_exponents[c];
        long rhs = long(r.n) * t.vertices[r.w].coupling_exponents[c];
        if (lhs != rhs)
          fail(ErrorCode::SemanticError,
               where + ": theta(" + t.vertices[r.v].name + ")^" + std::to_string(r.m) +
                   " != theta(" + t.vertices[r.w].name + ")^" + std::to_string(r.n));
      }
      t.qgs_relations.push_back(r);
    }
  }

  t.build_lookups();
  return t;
}

TheorySpec load_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open theory file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_theory(ss.str());
}

Rational corolla_weight(const TheorySpec& theory, int vertex_index) {
  const VertexResidue& v = theory.vertices.at(vertex_index);
  Rational w = v.weight;
  for (int e : v.legs) w += Rational(theory.edges.at(e).weight, 2);
  return w;
}

Rational corolla_weight(const TheorySpec& theory, const std::string& vertex_name) {
  return corolla_weight(theory, theory.vertex_index(vertex_name));
}

CorollaClass classify_corolla(const TheorySpec& theory, int vertex_index) {
  Rational w = corolla_weight(theory, vertex_index);
  Rational renorm = Rational(theory.dimension) *
                    (Rational(1) - Rational(theory.vertices.at(vertex_index).valence(), 2));
  if (w == renorm) return CorollaClass::Renormalizable;
  return w > renorm ? CorollaClass::NonRenormalizable : CorollaClass::SuperRenormalizable;
}

CorollaClass classify_corolla(const TheorySpec& theory, const std::string& vertex_name) {
  return classify_corolla(theory, theory.vertex_index(vertex_name));
}

std::optional<std::pair<int, int>> minimal_theta_powers(const TheorySpec& theory,
                                                        int v, int w) {
  const auto& a = theory.vertices.at(v).coupling_exponents;
  const auto& b = theory.vertices.at(w).coupling_exponents;
  // Solve m*a = n*b with minimal positive m, n.
  long m = 0, n = 0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (a[c] == 0 && b[c] == 0) continue;
    if (a[c] == 0 || b[c] == 0) return std::nullopt;
    long g = std::gcd(long(a[c]), long(b[c]));
    long mc = b[c] / g, nc = a[c] / g;
    if (m == 0) {
      m = mc;
      n = nc;
    } else if (m != mc || n != nc) {
      return std::nullopt;
    }
  }
  if (m == 0) return std::nullopt;
  return std::make_pair(int(m), int(n));
}

GradingCompatReport grading_compatibility(const TheorySpec& theory) {
  GradingCompatReport report;
  const int nv = theory.num_vertex_residues();
  for (int v = 0; v < nv; ++v) {
    for (int w = v + 1; w < nv; ++w) {
      auto mn = minimal_theta_powers(theory, v, w);
      if (mn) {
        Rational lhs = Rational(mn->first) * corolla_weight(theory, v);
        Rational rhs = Rational(mn->second) * corolla_weight(theory, w);
        if (lhs != rhs) {
          report.coupling_grading_compatible = false;
          report.coupling_witnesses.emplace_back(v, w);
        }
      }
    }
  }
  std::optional<Rational> quotient;
  for (int v = 0; v < nv; ++v) {
    int val = theory.vertices[v].valence();
    if (val == 2) {
      report.two_valent_review.push_back(v);
      continue;
    }
    Rational q = corolla_weight(theory, v) / Rational(val - 2);
    if (!quotient) {
      quotient = q;
    } else if (*quotient != q) {
      report.loop_grading_compatible = false;
      report.loop_witnesses.emplace_back(v, v);
    }
  }
  return report;
}

CographCriterion cograph_divergence_criterion(const TheorySpec& theory) {
  CographCriterion result;
  result.criterion_applies = true;
  result.certified = true;
  for (int v = 0; v < theory.num_vertex_residues(); ++v) {
    if (classify_corolla(theory, v) == CorollaClass::SuperRenormalizable)
      result.criterion_applies = false;
    if (theory.vertices[v].weight < 0) result.certified = false;
  }
  result.certified = result.certified && result.criterion_applies;
  return result;
}

} // namespace hopfren

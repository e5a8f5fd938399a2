#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hopfren/rational.hpp"

namespace hopfren {

// Mass-dimension weight of a propagator polynomial. Typically negative.
struct EdgeResidue {
  std::string name;
  int weight = 0;
  bool oriented = false;
};

// A fundamental interaction: its weight, attached edge types (a multiset of
// edge residue indices) and the coupling monomial that scales it.
struct VertexResidue {
  std::string name;
  int weight = 0;
  std::vector<int> legs;               // edge residue indices, sorted
  std::vector<int> coupling_exponents; // one entry per declared coupling

  int valence() const { return int(legs.size()); }
};

enum class CorollaClass { SuperRenormalizable, Renormalizable, NonRenormalizable };

std::string to_string(CorollaClass c);

// Quantum gauge symmetry quadruple {v, m; w, n} with theta(v)^m = theta(w)^n.
struct QgsRelation {
  int v = -1;
  int m = 1;
  int w = -1;
  int n = 1;
};

class TheorySpec;

// External leg structure: a sorted multiset of (edge residue, direction).
// Direction is 0 for unoriented residues, +1/-1 for oriented ones.
struct Amplitude {
  std::vector<std::pair<int, int>> legs; // sorted (residue index, dir)

  enum class Kind { Vertex, Edge, PureQuantum };

  static Amplitude of_vertex(const TheorySpec& theory, int vertex_index);
  static Amplitude of_edge(const TheorySpec& theory, int edge_index);

  bool operator==(const Amplitude& other) const { return legs == other.legs; }
  bool operator<(const Amplitude& other) const { return legs < other.legs; }

  int size() const { return int(legs.size()); }
};

struct AmplitudeInfo {
  Amplitude amplitude;
  Amplitude::Kind kind = Amplitude::Kind::PureQuantum;
  int residue_index = -1; // vertex or edge index when kind is not PureQuantum
};

class TheorySpec {
public:
  int dimension = 0;
  std::vector<EdgeResidue> edges;
  std::vector<VertexResidue> vertices;
  std::vector<std::string> couplings;
  std::vector<QgsRelation> qgs_relations;

  int edge_index(const std::string& name) const;
  int vertex_index(const std::string& name) const;
  int coupling_index(const std::string& name) const;

  int num_vertex_residues() const { return int(vertices.size()); }
  int num_edge_residues() const { return int(edges.size()); }
  int num_couplings() const { return int(couplings.size()); }

  // Classifies an external leg structure against the declared residues.
  AmplitudeInfo classify_amplitude(const Amplitude& amplitude) const;

  // Matching vertex residues for a leg multiset (ignoring orientation).
  std::vector<int> vertex_residues_with_legs(const std::vector<int>& legs) const;

  // FNV-1a hash of the canonical serialization; used for cache keys and reports.
  std::uint64_t content_hash() const;
  std::string to_json() const;

private:
  mutable std::map<std::string, int> edge_lookup_;
  mutable std::map<std::string, int> vertex_lookup_;
  mutable std::map<std::string, int> coupling_lookup_;
  void build_lookups() const;
  friend TheorySpec load_theory(const std::string& text);
};

// Parses and validates a theory spec from JSON text.
// Throws Error{ParseError} or Error{SemanticError}.
TheorySpec load_theory(const std::string& text);
TheorySpec load_theory_file(const std::string& path);

// Weight of the corolla of vertex residue v: omega(v) + 1/2 sum of leg weights.
Rational corolla_weight(const TheorySpec& theory, int vertex_index);
Rational corolla_weight(const TheorySpec& theory, const std::string& vertex_name);

CorollaClass classify_corolla(const TheorySpec& theory, int vertex_index);
CorollaClass classify_corolla(const TheorySpec& theory, const std::string& vertex_name);

struct GradingCompatReport {
  bool coupling_grading_compatible = true;
  bool loop_grading_compatible = true;
  // Pairs (v, w) violating the coupling condition m*varpi(v) = n*varpi(w).
  std::vector<std::pair<int, int>> coupling_witnesses;
  // Pairs violating the loop condition, plus 2-valent residues needing review.
  std::vector<std::pair<int, int>> loop_witnesses;
  std::vector<int> two_valent_review;
};

GradingCompatReport grading_compatibility(const TheorySpec& theory);

// Minimal positive (m, n) with theta(v)^m = theta(w)^n, if the coupling
// monomials are compatible at all.
std::optional<std::pair<int, int>> minimal_theta_powers(const TheorySpec& theory,
                                                        int v, int w);

struct CographCriterion {
  bool criterion_applies = false; // only (non-)renormalizable corollas present
  bool certified = false;         // additionally omega(v) >= 0 for all vertices
};

CographCriterion cograph_divergence_criterion(const TheorySpec& theory);

} // namespace hopfren

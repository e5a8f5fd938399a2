#pragma once

#include <memory>
#include <vector>

#include "hopfren/theory.hpp"

namespace hopfren {

using TheoryPtr = std::shared_ptr<const TheorySpec>;

// A colored Feynman multigraph with external-leg stubs. Vertices are dense
// ids 0..n-1. Internal edges are unordered pairs unless the residue is
// oriented, in which case `u` is initial and `v` terminal. External legs are
// single half-edges carrying a port tag; ports make legs distinguishable, so
// graphs with pinned legs compare like diagrams with labeled external momenta.
class FeynmanGraph {
public:
  struct Edge {
    int u = 0, v = 0;
    int residue = 0;
  };
  struct Leg {
    int vertex = 0;
    int residue = 0;
    int dir = 0; // 0 unoriented, +1 outgoing, -1 incoming
    int port = 0;
  };

  TheoryPtr theory;
  std::vector<int> vertex_residues;
  std::vector<Edge> edges;
  std::vector<Leg> legs;

  int num_vertices() const { return int(vertex_residues.size()); }
  int num_edges() const { return int(edges.size()); }
  int num_legs() const { return int(legs.size()); }
  bool empty() const { return vertex_residues.empty(); }

  // Asserts every half-edge slot of every vertex is filled exactly once.
  void validate() const;

  void normalize_edges();      // sorts endpoints of unoriented edges, then the edge list
  std::vector<int> component_labels() const; // vertex -> component id
  int num_components() const;
  bool is_connected() const;
};

// First Betti number over internal edges: components - vertices + edges.
int loop_number(const FeynmanGraph& g);

// Connected and free of internal bridges.
bool is_one_pi(const FeynmanGraph& g);

// External leg structure. Errors on disconnected input.
Amplitude residue_of(const FeynmanGraph& g);

enum class GradingKind { Loop, Residue, Coupling };

struct GradingVector {
  GradingKind kind = GradingKind::Loop;
  std::vector<long> coords;

  bool operator==(const GradingVector& o) const {
    return kind == o.kind && coords == o.coords;
  }
};

struct Gradings {
  long loop = 0;
  std::vector<long> residue; // intres - extres, length = #vertex residues
  std::vector<long> coupling; // theta image, length = #couplings
};

// Gradings of a connected graph (or a disjoint union; they add over components).
Gradings gradings_of(const FeynmanGraph& g);

// Pushes a residue multi-index through the coupling exponents of theta.
std::vector<long> theta_multiindex(const TheorySpec& theory,
                                   const std::vector<long>& residue_grading);

// Empty graph (the algebra unit as a graph-shaped value).
FeynmanGraph empty_graph(TheoryPtr theory);

} // namespace hopfren

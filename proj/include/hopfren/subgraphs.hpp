#pragma once

#include "hopfren/registry.hpp"

namespace hopfren {

// A product of vertex-disjoint 1PI subgraphs of a parent graph, each given by
// its internal-edge subset. The empty selection is the unit; the full
// selection is the parent itself.
struct SubgraphSelection {
  std::vector<std::vector<int>> components; // edge indices into the parent
};

// The subgraph induced by an edge subset: inherited external structure, ports
// assigned deterministically along the sorted legs.
FeynmanGraph induced_subgraph(const FeynmanGraph& parent, const std::vector<int>& edges);

struct DivergentSubgraphs {
  std::vector<SubgraphSelection> selections; // always contains the empty one
  // divergent 1PI subgraphs whose residue lies outside the residue set;
  // their presence makes the coalgebra ill-defined
  std::vector<Amplitude> obstructions;
};

// All products of vertex-disjoint divergent 1PI subgraphs with residues in
// the residue set. Includes the empty selection, and the full one exactly
// when the parent is divergent with residue in the residue set.
DivergentSubgraphs divergent_subgraphs(const FeynmanGraph& g);

// Shrinks each component to a vertex (vertex residues) or to an edge (edge
// residues). Contracting the full graph yields the empty graph.
FeynmanGraph contract(const FeynmanGraph& g, const SubgraphSelection& selection);

struct InsertionCount {
  BigInt ins = 0;    // labeled insertion configurations into a target graph
  BigInt insaut = 0; // placements of the class monomial whose result is the parent
  BigInt insrr = 0;  // ins computed from (residue, residue-grading) data alone
  BigInt isoemb = 0; // divergent subgraph instances of the class in the parent
};

// ins: number of insertion configurations of the monomial gamma into target.
// Vertex-type components occupy distinct matching vertices; propagator-type
// components form ordered chains on matching edges; component instances are
// labeled. Incompatible residues give zero.
BigInt ins_count(const GraphRegistry& reg, const Monomial& gamma,
                 const FeynmanGraph& target);

// insrr: the same count from the vertex and edge multisets determined by an
// amplitude and a residue-grading multi-index.
BigInt insrr_count(const GraphRegistry& reg, const Monomial& gamma,
                   const Amplitude& amplitude, const std::vector<long>& resgrd);

// isoemb: divergent subgraph selections of `parent` whose class monomial is
// gamma. When `cograph` is given, only instances whose contraction is
// isomorphic to it are counted.
BigInt isoemb_count(GraphRegistry& reg, const Monomial& gamma,
                    const FeynmanGraph& parent,
                    const FeynmanGraph* cograph = nullptr);

// insaut: unlabeled placements of gamma into `host` for which some gluing of
// the component legs produces a graph isomorphic to `result` (ports pinned).
BigInt insaut_count(GraphRegistry& reg, const Monomial& gamma,
                    const FeynmanGraph& host, const FeynmanGraph& result);

InsertionCount insertion_counts(GraphRegistry& reg, const Monomial& gamma,
                                const FeynmanGraph& target,
                                const FeynmanGraph* result = nullptr);

struct Lemma12Report {
  bool holds = true;
  // failing pairs as (parent name, selection description)
  std::vector<std::string> witnesses;
};

// Checks 1/Sym(g) = insaut/isoemb * 1/(Sym(gamma) Sym(g/gamma)) for every
// divergent subgraph selection of g, with isoemb matched to the cograph.
Lemma12Report verify_lemma12(GraphRegistry& reg, const FeynmanGraph& g);

} // namespace hopfren

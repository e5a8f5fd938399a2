#pragma once

#include <cstdint>
#include <string>

#include "hopfren/graph.hpp"

namespace hopfren {

// Canonical byte-string key. Two graphs get equal keys exactly when they are
// isomorphic as colored multigraphs with matching external structure.
//
// Pinned keys treat each external port as an individual label (diagrams with
// labeled external momenta); unpinned keys anonymize the ports and realize the
// isomorphism notion under which Hopf algebra generators are identified.
using CanonicalForm = std::string;

CanonicalForm canonicalize(const FeynmanGraph& g);          // pinned
CanonicalForm canonicalize_unpinned(const FeynmanGraph& g); // ports erased

// Relabels g into the canonical vertex order of the pinned form.
FeynmanGraph canonical_graph(const FeynmanGraph& g);

// Order of the automorphism group acting on vertices, fixing every vertex
// attached to an external leg, preserving colors, orientations and edge
// multiplicities between vertex pairs.
std::int64_t vertex_automorphism_count(const FeynmanGraph& g);

// Full symmetry factor: vertex automorphisms times the factorial of each
// parallel-edge class. Sym of the empty graph is 1.
std::int64_t symmetry_factor(const FeynmanGraph& g);

// Short stable display name derived from the unpinned canonical key.
std::string graph_display_name(const FeynmanGraph& g);

std::uint64_t fnv1a(const std::string& bytes);

} // namespace hopfren

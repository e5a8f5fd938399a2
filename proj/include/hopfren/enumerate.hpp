#pragma once

#include <climits>

#include "hopfren/graph.hpp"

namespace hopfren {

struct EnumOptions {
  long max_graphs = 1'000'000; // per (residue, loops) slot; typed error beyond
  long stop_after = LONG_MAX;  // early exit once this many classes are found
  bool allow_self_loops = true;
  std::string cache_dir; // used by the caching wrapper in io.hpp
};

// Complete, duplicate-free list of connected 1PI graphs with the given
// external structure and loop number. Graphs are pinned-canonical and sorted
// by canonical form; ports are 0..X-1 along the sorted amplitude legs.
//
// loops == 0 returns the matching corollas (vertex residues only).
// Theories with vertex residues of valence < 3 are rejected: at fixed loop
// order their graph sets per slot are infinite.
std::vector<FeynmanGraph> enumerate_1pi(TheoryPtr theory, const Amplitude& amplitude,
                                        int loops, const EnumOptions& options = {});

// All external-leg structures with 1..max_legs legs realized by at least one
// 1PI graph with 1..loop_cap loops, classified against the residue set.
std::vector<AmplitudeInfo> amplitude_set(TheoryPtr theory, int loop_cap, int max_legs,
                                         const EnumOptions& options = {});

// Parses an amplitude: either a declared residue name or a comma-separated
// list of edge residue names (oriented ones suffixed with + or -).
Amplitude parse_amplitude(const TheorySpec& theory, const std::string& text);
std::string amplitude_to_string(const TheorySpec& theory, const Amplitude& amplitude);

} // namespace hopfren

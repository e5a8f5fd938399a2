#include "hopfren/enumerate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "hopfren/canonical.hpp"

namespace hopfren {

namespace {

struct Enumerator {
  TheoryPtr theory;
  const Amplitude& amplitude;
  int loops;
  const EnumOptions& options;

  int n = 0;                              // number of vertices this round
  std::vector<int> vres;                  // vertex -> residue
  std::vector<std::map<int, int>> rem;    // vertex -> edge residue -> free slots
  std::vector<bool> touched;              // vertex carries a port or an edge
  std::vector<FeynmanGraph::Leg> legs;
  std::vector<FeynmanGraph::Edge> edges;

  std::map<CanonicalForm, FeynmanGraph> found;
  bool stop = false;

  Enumerator(TheoryPtr t, const Amplitude& a, int l, const EnumOptions& o)
      : theory(std::move(t)), amplitude(a), loops(l), options(o) {}

  void emit() {
    FeynmanGraph g;
    g.theory = theory;
    g.vertex_residues = vres;
    g.edges = edges;
    g.legs = legs;
    if (!g.is_connected() || !is_one_pi(g)) return;
    CanonicalForm key = canonicalize(g);
    if (found.count(key)) return;
    if (long(found.size()) >= options.max_graphs)
      fail(ErrorCode::ResourceCap,
           "enumeration exceeded max_graphs=" + std::to_string(options.max_graphs));
    found.emplace(key, canonical_graph(g));
    if (long(found.size()) >= options.stop_after) stop = true;
  }

  // True when a smaller untouched vertex of the same residue exists; such a
  // vertex must be used first (orderly generation).
  bool blocked(int v) const {
    if (touched[v]) return false;
    for (int w = 0; w < v; ++w)
      if (!touched[w] && vres[w] == vres[v]) return true;
    return false;
  }

  void assign_ports(std::size_t port) {
    if (stop) return;
    if (port == amplitude.legs.size()) {
      fill_vertex(0);
      return;
    }
    auto [res, dir] = amplitude.legs[port];
    for (int v = 0; v < n; ++v) {
      auto it = rem[v].find(res);
      if (it == rem[v].end() || it->second == 0) continue;
      if (blocked(v)) continue;
      bool was_touched = touched[v];
      it->second -= 1;
      touched[v] = true;
      legs.push_back({v, res, dir, int(port)});
      assign_ports(port + 1);
      legs.pop_back();
      touched[v] = was_touched;
      it->second += 1;
      if (stop) return;
    }
  }

  void fill_vertex(int u) {
    if (stop) return;
    if (u == n) {
      emit();
      return;
    }
    fill_residue(u, rem[u].begin(), u);
  }

  // Distributes u's remaining slots of each residue over self-loops and
  // edges to vertices v >= u (self) / v > u, in order.
  void fill_residue(int u, std::map<int, int>::iterator it, int v) {
    if (stop) return;
    while (it != rem[u].end() && it->second == 0) {
      ++it;
      v = u;
    }
    if (it == rem[u].end()) {
      fill_vertex(u + 1);
      return;
    }
    int res = it->first;
    bool oriented = theory->edges.at(res).oriented;
    if (v == u) {
      // self-loops first
      if (options.allow_self_loops) {
        int max_self = it->second / 2;
        for (int s = max_self; s >= 1; --s) {
          it->second -= 2 * s;
          bool was = touched[u];
          touched[u] = true;
          for (int k = 0; k < s; ++k) edges.push_back({u, u, res});
          fill_residue(u, it, v + 1);
          for (int k = 0; k < s; ++k) edges.pop_back();
          touched[u] = was;
          it->second += 2 * s;
          if (stop) return;
        }
      }
      fill_residue(u, it, v + 1);
      return;
    }
    if (v >= n) return; // slots left over but no partners: dead branch
    auto vit = rem[v].find(res);
    int cap = (vit == rem[v].end()) ? 0 : vit->second;
    int top = std::min(it->second, cap);
    if (blocked(v)) top = 0;
    for (int m = top; m >= 0; --m) {
      if (m > 0) {
        it->second -= m;
        vit->second -= m;
      }
      bool wu = touched[u], wv = touched[v];
      if (m > 0) touched[u] = touched[v] = true;
      if (!oriented || m == 0) {
        for (int k = 0; k < m; ++k) edges.push_back({u, v, res});
        fill_residue(u, it, v + 1);
        for (int k = 0; k < m; ++k) edges.pop_back();
      } else {
        for (int out = 0; out <= m; ++out) {
          for (int k = 0; k < out; ++k) edges.push_back({u, v, res});
          for (int k = out; k < m; ++k) edges.push_back({v, u, res});
          fill_residue(u, it, v + 1);
          for (int k = 0; k < m; ++k) edges.pop_back();
          if (stop) break;
        }
      }
      touched[u] = wu;
      touched[v] = wv;
      if (m > 0) {
        it->second += m;
        vit->second += m;
      }
      if (stop) return;
    }
  }

  void run_multiset(const std::vector<int>& counts) {
    n = 0;
    vres.clear();
    for (int r = 0; r < int(counts.size()); ++r)
      for (int k = 0; k < counts[r]; ++k) vres.push_back(r);
    n = int(vres.size());
    if (n == 0) return;

    // per-residue slot feasibility
    std::map<int, long> slots;
    for (int r : vres)
      for (int e : theory->vertices[r].legs) slots[e] += 1;
    std::map<int, long> ext;
    for (auto [e, dir] : amplitude.legs) ext[e] += 1;
    for (auto [e, x] : ext)
      if (slots[e] < x) return;
    for (auto [e, s] : slots)
      if ((s - (ext.count(e) ? ext[e] : 0)) % 2 != 0) return;

    rem.assign(n, {});
    for (int v = 0; v < n; ++v)
      for (int e : theory->vertices[vres[v]].legs) rem[v][e] += 1;
    touched.assign(n, false);
    legs.clear();
    edges.clear();
    assign_ports(0);
  }

  void run() {
    const int X = amplitude.size();
    const long budget = 2L * (loops - 1) + X;
    if (budget < 1) return;
    std::vector<int> counts(theory->num_vertex_residues(), 0);
    iterate_multisets(counts, 0, budget);
  }

  void iterate_multisets(std::vector<int>& counts, int r, long budget) {
    if (stop) return;
    if (r == int(counts.size())) {
      if (budget == 0) run_multiset(counts);
      return;
    }
    int step = theory->vertices[r].valence() - 2;
    for (int k = 0; k * long(step) <= budget; ++k) {
      counts[r] = k;
      iterate_multisets(counts, r + 1, budget - k * long(step));
      if (stop) break;
    }
    counts[r] = 0;
  }
};

} // namespace

std::vector<FeynmanGraph> enumerate_1pi(TheoryPtr theory, const Amplitude& amplitude,
                                        int loops, const EnumOptions& options) {
  if (loops < 0) fail(ErrorCode::SemanticError, "loop order must be >= 0");
  if (amplitude.size() == 0)
    fail(ErrorCode::Unsupported, "vacuum amplitudes are not enumerated");
  for (const auto& v : theory->vertices)
    if (v.valence() < 3)
      fail(ErrorCode::Unsupported,
           "enumeration needs all vertex valences >= 3; '" + v.name +
               "' makes graph sets per slot infinite");

  if (loops == 0) {
    std::vector<FeynmanGraph> out;
    std::vector<int> legs;
    for (auto [e, dir] : amplitude.legs) legs.push_back(e);
    for (int r : theory->vertex_residues_with_legs(legs)) {
      FeynmanGraph g;
      g.theory = theory;
      g.vertex_residues = {r};
      int port = 0;
      for (auto [e, dir] : amplitude.legs) g.legs.push_back({0, e, dir, port++});
      out.push_back(canonical_graph(g));
    }
    return out;
  }

  Enumerator en(theory, amplitude, loops, options);
  en.run();
  std::vector<FeynmanGraph> out;
  out.reserve(en.found.size());
  for (auto& [key, g] : en.found) out.push_back(std::move(g));
  return out;
}

std::vector<AmplitudeInfo> amplitude_set(TheoryPtr theory, int loop_cap, int max_legs,
                                         const EnumOptions& options) {
  if (loop_cap < 1) fail(ErrorCode::SemanticError, "loop cap must be >= 1");
  // candidate leg tokens: (edge residue, dir)
  std::vector<std::pair<int, int>> tokens;
  for (int e = 0; e < theory->num_edge_residues(); ++e) {
    if (theory->edges[e].oriented) {
      tokens.emplace_back(e, -1);
      tokens.emplace_back(e, +1);
    } else {
      tokens.emplace_back(e, 0);
    }
  }
  std::vector<AmplitudeInfo> out;
  std::vector<std::pair<int, int>> current;
  EnumOptions probe = options;
  probe.stop_after = 1;

  // enumerate multisets of sizes 1..max_legs
  for (int size = 1; size <= max_legs; ++size) {
    std::function<void(std::size_t, int)> build = [&](std::size_t t, int left) {
      if (left == 0) {
        Amplitude a;
        a.legs = current;
        std::sort(a.legs.begin(), a.legs.end());
        for (int l = 1; l <= loop_cap; ++l) {
          if (!enumerate_1pi(theory, a, l, probe).empty()) {
            out.push_back(theory->classify_amplitude(a));
            break;
          }
        }
        return;
      }
      for (std::size_t i = t; i < tokens.size(); ++i) {
        current.push_back(tokens[i]);
        build(i, left - 1);
        current.pop_back();
      }
    };
    build(0, size);
  }
  std::sort(out.begin(), out.end(), [](const AmplitudeInfo& a, const AmplitudeInfo& b) {
    return std::make_pair(a.amplitude.size(), a.amplitude.legs) <
           std::make_pair(b.amplitude.size(), b.amplitude.legs);
  });
  return out;
}

Amplitude parse_amplitude(const TheorySpec& theory, const std::string& text) {
  // residue name?
  for (int v = 0; v < theory.num_vertex_residues(); ++v)
    if (theory.vertices[v].name == text) return Amplitude::of_vertex(theory, v);
  for (int e = 0; e < theory.num_edge_residues(); ++e)
    if (theory.edges[e].name == text) return Amplitude::of_edge(theory, e);

  Amplitude a;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    int dir = 0;
    if (item.back() == '+') {
      dir = +1;
      item.pop_back();
    } else if (item.back() == '-') {
      dir = -1;
      item.pop_back();
    }
    int e = theory.edge_index(item);
    if (theory.edges[e].oriented && dir == 0)
      fail(ErrorCode::SemanticError,
           "oriented leg '" + item + "' needs a +/- direction suffix");
    if (!theory.edges[e].oriented) dir = 0;
    a.legs.emplace_back(e, dir);
  }
  if (a.legs.empty())
    fail(ErrorCode::SemanticError, "empty amplitude spec '" + text + "'");
  std::sort(a.legs.begin(), a.legs.end());
  return a;
}

std::string amplitude_to_string(const TheorySpec& theory, const Amplitude& amplitude) {
  std::string out;
  for (std::size_t i = 0; i < amplitude.legs.size(); ++i) {
    if (i) out += ",";
    out += theory.edges.at(amplitude.legs[i].first).name;
    if (amplitude.legs[i].second > 0) out += "+";
    if (amplitude.legs[i].second < 0) out += "-";
  }
  return out;
}

} // namespace hopfren

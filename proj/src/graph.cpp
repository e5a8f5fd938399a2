#include "hopfren/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace hopfren {

void FeynmanGraph::validate() const {
  // slot usage per (vertex, edge residue)
  std::vector<std::map<int, int>> used(num_vertices());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= num_vertices() || e.v < 0 || e.v >= num_vertices())
      fail(ErrorCode::SemanticError, "edge endpoint out of range");
    used[e.u][e.residue] += 1;
    used[e.v][e.residue] += 1; // a self-loop fills two slots of its vertex
  }
  for (const Leg& l : legs) {
    if (l.vertex < 0 || l.vertex >= num_vertices())
      fail(ErrorCode::SemanticError, "leg vertex out of range");
    const EdgeResidue& er = theory->edges.at(l.residue);
    if (er.oriented ? l.dir == 0 : l.dir != 0)
      fail(ErrorCode::SemanticError, "leg direction inconsistent with residue orientation");
    used[l.vertex][l.residue] += 1;
  }
  for (int v = 0; v < num_vertices(); ++v) {
    std::map<int, int> expected;
    for (int e : theory->vertices.at(vertex_residues[v]).legs) expected[e] += 1;
    if (used[v] != expected)
      fail(ErrorCode::SemanticError,
           "vertex " + std::to_string(v) + " has unfilled or overfilled half-edge slots");
  }
}

void FeynmanGraph::normalize_edges() {
  for (Edge& e : edges)
    if (!theory->edges.at(e.residue).oriented && e.u > e.v) std::swap(e.u, e.v);
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v, a.residue) < std::tie(b.u, b.v, b.residue);
  });
  std::sort(legs.begin(), legs.end(),
            [](const Leg& a, const Leg& b) { return a.port < b.port; });
}

std::vector<int> FeynmanGraph::component_labels() const {
  std::vector<int> label(num_vertices(), -1);
  int next = 0;
  std::vector<std::vector<int>> adj(num_vertices());
  for (const Edge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (int start = 0; start < num_vertices(); ++start) {
    if (label[start] >= 0) continue;
    std::vector<int> stack{start};
    label[start] = next;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (label[w] < 0) {
          label[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  return label;
}

int FeynmanGraph::num_components() const {
  auto labels = component_labels();
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

bool FeynmanGraph::is_connected() const { return num_components() <= 1; }

int loop_number(const FeynmanGraph& g) {
  return g.num_components() - g.num_vertices() + g.num_edges();
}

namespace {

// Bridge detection on the internal multigraph. Parallel edges and self-loops
// are never bridges.
bool has_bridge(const FeynmanGraph& g) {
  int n = g.num_vertices();
  std::vector<std::vector<std::pair<int, int>>> adj(n); // (neighbor, edge id)
  for (int i = 0; i < g.num_edges(); ++i) {
    const auto& e = g.edges[i];
    if (e.u == e.v) continue;
    adj[e.u].emplace_back(e.v, i);
    adj[e.v].emplace_back(e.u, i);
  }
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  bool found = false;
  // iterative DFS to avoid recursion limits on long chains
  struct Frame {
    int v;
    int parent_edge;
    std::size_t next;
  };
  for (int root = 0; root < n && !found; ++root) {
    if (disc[root] >= 0) continue;
    std::vector<Frame> stack{{root, -1, 0}};
    disc[root] = low[root] = timer++;
    while (!stack.empty() && !found) {
      Frame& f = stack.back();
      if (f.next < adj[f.v].size()) {
        auto [w, id] = adj[f.v][f.next++];
        if (id == f.parent_edge) continue;
        if (disc[w] < 0) {
          disc[w] = low[w] = timer++;
          stack.push_back({w, id, 0});
        } else {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
      } else {
        int v = f.v;
        int pe = f.parent_edge;
        stack.pop_back();
        if (!stack.empty()) {
          int p = stack.back().v;
          low[p] = std::min(low[p], low[v]);
          if (low[v] > disc[p]) {
            // unless the tree edge has a parallel partner it is a bridge
            int mult = 0;
            const auto& e = g.edges[pe];
            for (const auto& o : g.edges)
              if ((o.u == e.u && o.v == e.v) || (o.u == e.v && o.v == e.u)) ++mult;
            if (mult <= 1) found = true;
          }
        }
      }
    }
  }
  return found;
}

} // namespace

bool is_one_pi(const FeynmanGraph& g) {
  if (g.empty()) return false;
  if (!g.is_connected()) return false;
  return !has_bridge(g);
}

Amplitude residue_of(const FeynmanGraph& g) {
  if (!g.empty() && !g.is_connected())
    fail(ErrorCode::SemanticError, "residue of a disconnected graph is undefined");
  Amplitude a;
  for (const auto& l : g.legs) a.legs.emplace_back(l.residue, l.dir);
  std::sort(a.legs.begin(), a.legs.end());
  return a;
}

Gradings gradings_of(const FeynmanGraph& g) {
  const TheorySpec& t = *g.theory;
  Gradings out;
  out.residue.assign(t.num_vertex_residues(), 0);
  out.coupling.assign(t.num_couplings(), 0);
  if (g.empty()) return out;

  auto labels = g.component_labels();
  int ncomp = g.num_components();
  out.loop = ncomp - g.num_vertices() + g.num_edges();

  for (int r : g.vertex_residues) out.residue[r] += 1; // intres

  // extres: one unit vector per component whose residue is a vertex residue
  std::vector<Amplitude> comp_res(ncomp);
  for (const auto& l : g.legs)
    comp_res[labels[l.vertex]].legs.emplace_back(l.residue, l.dir);
  for (auto& a : comp_res) std::sort(a.legs.begin(), a.legs.end());
  for (const auto& a : comp_res) {
    AmplitudeInfo info = t.classify_amplitude(a);
    if (info.kind == Amplitude::Kind::Vertex) out.residue[info.residue_index] -= 1;
  }
  out.coupling = theta_multiindex(t, out.residue);
  return out;
}

std::vector<long> theta_multiindex(const TheorySpec& theory,
                                   const std::vector<long>& residue_grading) {
  std::vector<long> out(theory.num_couplings(), 0);
  for (int v = 0; v < theory.num_vertex_residues(); ++v)
    for (int c = 0; c < theory.num_couplings(); ++c)
      out[c] += residue_grading[v] * theory.vertices[v].coupling_exponents[c];
  return out;
}

FeynmanGraph empty_graph(TheoryPtr theory) {
  FeynmanGraph g;
  g.theory = std::move(theory);
  return g;
}

} // namespace hopfren

#include "hopfren/canonical.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <tuple>

namespace hopfren {

namespace {

// rel: 0 unoriented or self-loop, +1 directed u->v, -1 directed v->u
using EdgeToken = std::pair<int, int>; // (residue, rel)

struct CanonContext {
  const FeynmanGraph* g = nullptr;
  bool pinned = true;
  int n = 0;
  // adjacency multisets keyed by ordered vertex pair; self entries at (v,v)
  std::map<std::pair<int, int>, std::vector<EdgeToken>> adj;

  std::vector<EdgeToken> tokens(int u, int v) const {
    auto it = adj.find({u, v});
    return it == adj.end() ? std::vector<EdgeToken>{} : it->second;
  }
};

CanonContext make_context(const FeynmanGraph& g, bool pinned) {
  CanonContext ctx;
  ctx.g = &g;
  ctx.pinned = pinned;
  ctx.n = g.num_vertices();
  for (const auto& e : g.edges) {
    bool oriented = g.theory->edges.at(e.residue).oriented;
    if (e.u == e.v) {
      ctx.adj[{e.u, e.u}].emplace_back(e.residue, 0);
    } else if (!oriented) {
      ctx.adj[{e.u, e.v}].emplace_back(e.residue, 0);
      ctx.adj[{e.v, e.u}].emplace_back(e.residue, 0);
    } else {
      ctx.adj[{e.u, e.v}].emplace_back(e.residue, +1);
      ctx.adj[{e.v, e.u}].emplace_back(e.residue, -1);
    }
  }
  for (auto& [key, vec] : ctx.adj) std::sort(vec.begin(), vec.end());
  return ctx;
}

std::vector<int> initial_colors(const CanonContext& ctx) {
  using Key = std::tuple<int, std::vector<std::tuple<int, int, int>>>;
  std::vector<Key> keys(ctx.n);
  for (int v = 0; v < ctx.n; ++v)
    std::get<0>(keys[v]) = ctx.g->vertex_residues[v];
  for (const auto& l : ctx.g->legs) {
    int port = ctx.pinned ? l.port : -1;
    std::get<1>(keys[l.vertex]).emplace_back(l.residue, l.dir, port);
  }
  for (auto& k : keys) std::sort(std::get<1>(k).begin(), std::get<1>(k).end());
  std::map<Key, int> rank;
  for (const auto& k : keys) rank.emplace(k, 0);
  int next = 0;
  for (auto& [k, r] : rank) r = next++;
  std::vector<int> colors(ctx.n);
  for (int v = 0; v < ctx.n; ++v) colors[v] = rank[keys[v]];
  return colors;
}

int color_count(const std::vector<int>& colors) {
  return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
}

std::vector<int> refine(const CanonContext& ctx, std::vector<int> colors) {
  while (true) {
    using Sig = std::pair<int, std::vector<std::tuple<int, int, int>>>;
    std::vector<Sig> sigs(ctx.n);
    for (int v = 0; v < ctx.n; ++v) {
      sigs[v].first = colors[v];
      for (int w = 0; w < ctx.n; ++w) {
        auto it = ctx.adj.find({v, w});
        if (it == ctx.adj.end()) continue;
        int other = (w == v) ? -1 : colors[w];
        for (const auto& [res, rel] : it->second)
          sigs[v].second.emplace_back(res, rel, other);
      }
      std::sort(sigs[v].second.begin(), sigs[v].second.end());
    }
    std::map<Sig, int> rank;
    for (const auto& s : sigs) rank.emplace(s, 0);
    int next = 0;
    for (auto& [s, r] : rank) r = next++;
    std::vector<int> refined(ctx.n);
    for (int v = 0; v < ctx.n; ++v) refined[v] = rank[sigs[v]];
    if (color_count(refined) == color_count(colors)) return refined;
    colors = std::move(refined);
  }
}

std::string encode_labeled(const CanonContext& ctx, const std::vector<int>& label) {
  std::string out;
  auto put = [&out](long x) {
    out.push_back(char('A' + ((x >> 12) & 63)));
    out.push_back(char('A' + ((x >> 6) & 63)));
    out.push_back(char('A' + (x & 63)));
  };
  put(ctx.n);
  std::vector<int> res_by_label(ctx.n);
  for (int v = 0; v < ctx.n; ++v) res_by_label[label[v]] = ctx.g->vertex_residues[v];
  for (int r : res_by_label) put(r);

  std::vector<std::tuple<int, int, int, int>> edge_rows;
  for (const auto& e : ctx.g->edges) {
    bool oriented = ctx.g->theory->edges.at(e.residue).oriented;
    int a = label[e.u], b = label[e.v];
    if (e.u == e.v) {
      edge_rows.emplace_back(a, a, e.residue, 0);
    } else if (oriented) {
      edge_rows.emplace_back(a, b, e.residue, 1);
    } else {
      edge_rows.emplace_back(std::min(a, b), std::max(a, b), e.residue, 0);
    }
  }
  std::sort(edge_rows.begin(), edge_rows.end());
  put(long(edge_rows.size()));
  for (auto [a, b, r, o] : edge_rows) {
    put(a);
    put(b);
    put(r);
    put(o);
  }

  std::vector<std::tuple<int, int, int, int>> leg_rows;
  for (const auto& l : ctx.g->legs) {
    if (ctx.pinned)
      leg_rows.emplace_back(l.port, label[l.vertex], l.residue, l.dir);
    else
      leg_rows.emplace_back(label[l.vertex], l.residue, l.dir, 0);
  }
  std::sort(leg_rows.begin(), leg_rows.end());
  put(long(leg_rows.size()));
  for (auto [a, b, c, d] : leg_rows) {
    put(a);
    put(b);
    put(c);
    put(d + 1);
  }
  return out;
}

void search(const CanonContext& ctx, std::vector<int> colors, std::string& best,
            std::vector<int>* best_label) {
  colors = refine(ctx, colors);
  // first cell with more than one vertex, in color order
  int ncolors = color_count(colors);
  std::vector<std::vector<int>> cells(ncolors);
  for (int v = 0; v < ctx.n; ++v) cells[colors[v]].push_back(v);
  int target = -1;
  for (int c = 0; c < ncolors; ++c)
    if (cells[c].size() > 1) {
      target = c;
      break;
    }
  if (target < 0) {
    // discrete: colors are a permutation
    std::string enc = encode_labeled(ctx, colors);
    if (best.empty() || enc < best) {
      best = enc;
      if (best_label) *best_label = colors;
    }
    return;
  }
  for (int v : cells[target]) {
    std::vector<int> split(ctx.n);
    for (int u = 0; u < ctx.n; ++u) {
      split[u] = 2 * colors[u] + 1;
      if (u == v) split[u] = 2 * colors[u];
    }
    search(ctx, split, best, best_label);
  }
}

std::string canonical_key(const FeynmanGraph& g, bool pinned,
                          std::vector<int>* label_out) {
  CanonContext ctx = make_context(g, pinned);
  std::string best;
  if (ctx.n == 0) return encode_labeled(ctx, {});
  search(ctx, initial_colors(ctx), best, label_out);
  return best;
}

} // namespace

CanonicalForm canonicalize(const FeynmanGraph& g) {
  return canonical_key(g, true, nullptr);
}

CanonicalForm canonicalize_unpinned(const FeynmanGraph& g) {
  return canonical_key(g, false, nullptr);
}

FeynmanGraph canonical_graph(const FeynmanGraph& g) {
  std::vector<int> label;
  canonical_key(g, true, &label);
  FeynmanGraph out;
  out.theory = g.theory;
  out.vertex_residues.assign(g.num_vertices(), -1);
  for (int v = 0; v < g.num_vertices(); ++v)
    out.vertex_residues[label[v]] = g.vertex_residues[v];
  for (const auto& e : g.edges)
    out.edges.push_back({label[e.u], label[e.v], e.residue});
  for (const auto& l : g.legs)
    out.legs.push_back({label[l.vertex], l.residue, l.dir, l.port});
  out.normalize_edges();
  return out;
}

std::int64_t vertex_automorphism_count(const FeynmanGraph& g) {
  if (g.empty()) return 1;
  CanonContext ctx = make_context(g, true);
  std::vector<int> colors = refine(ctx, initial_colors(ctx));
  // vertices attached to external legs must map to themselves
  std::vector<bool> pinned_vertex(ctx.n, false);
  for (const auto& l : g.legs) pinned_vertex[l.vertex] = true;

  std::vector<int> image(ctx.n, -1);
  std::vector<bool> used(ctx.n, false);
  std::int64_t count = 0;

  auto consistent = [&](int v, int w) {
    if (colors[v] != colors[w]) return false;
    if (pinned_vertex[v] && v != w) return false;
    if (ctx.tokens(v, v) != ctx.tokens(w, w)) return false;
    for (int u = 0; u < v; ++u) {
      if (image[u] < 0) continue;
      if (ctx.tokens(v, u) != ctx.tokens(w, image[u])) return false;
    }
    return true;
  };

  std::function<void(int)> rec = [&](int v) {
    if (v == ctx.n) {
      ++count;
      return;
    }
    for (int w = 0; w < ctx.n; ++w) {
      if (used[w] || !consistent(v, w)) continue;
      used[w] = true;
      image[v] = w;
      rec(v + 1);
      used[w] = false;
      image[v] = -1;
    }
  };
  rec(0);
  return count;
}

std::int64_t symmetry_factor(const FeynmanGraph& g) {
  if (g.empty()) return 1;
  std::int64_t sym = vertex_automorphism_count(g);
  // parallel edges of the same residue and direction are interchangeable
  std::map<std::tuple<int, int, int>, int> classes;
  for (const auto& e : g.edges) {
    bool oriented = g.theory->edges.at(e.residue).oriented;
    int a = e.u, b = e.v;
    if ((!oriented || a == b) && a > b) std::swap(a, b);
    if (!oriented && a > b) std::swap(a, b);
    classes[{a, b, e.residue}] += 1;
  }
  for (const auto& [key, mult] : classes) sym *= factorial_i64(mult);
  return sym;
}

std::string graph_display_name(const FeynmanGraph& g) {
  std::uint64_t h = fnv1a(canonicalize_unpinned(g));
  char buf[20];
  std::snprintf(buf, sizeof buf, "g%010llx", (unsigned long long)(h & 0xffffffffffull));
  return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace hopfren

#include "hopfren/subgraphs.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "hopfren/enumerate.hpp"

namespace hopfren {

namespace {

struct SlotToken {
  int residue = 0;
  int dir = 0; // 0 unoriented, +1 flow out of the carrier, -1 into it
  bool is_leg = false;
  int edge_index = -1; // parent edge
  int end = 0;         // 0 = u end, 1 = v end
  int leg_index = -1;  // parent leg
};

// Boundary slots of a vertex subset: slots not saturated by `inside` edges.
std::vector<SlotToken> boundary_slots(const FeynmanGraph& parent,
                                      const std::set<int>& vertices,
                                      const std::set<int>& inside_edges) {
  std::vector<SlotToken> out;
  for (int ei = 0; ei < parent.num_edges(); ++ei) {
    if (inside_edges.count(ei)) continue;
    const auto& e = parent.edges[ei];
    bool oriented = parent.theory->edges.at(e.residue).oriented;
    if (vertices.count(e.u)) {
      SlotToken t;
      t.residue = e.residue;
      t.dir = oriented ? +1 : 0;
      t.edge_index = ei;
      t.end = 0;
      out.push_back(t);
    }
    if (vertices.count(e.v)) {
      SlotToken t;
      t.residue = e.residue;
      t.dir = oriented ? -1 : 0;
      t.edge_index = ei;
      t.end = 1;
      out.push_back(t);
    }
  }
  for (int li = 0; li < parent.num_legs(); ++li) {
    const auto& l = parent.legs[li];
    if (!vertices.count(l.vertex)) continue;
    SlotToken t;
    t.residue = l.residue;
    t.dir = l.dir;
    t.is_leg = true;
    t.leg_index = li;
    out.push_back(t);
  }
  return out;
}

std::set<int> vertices_of(const FeynmanGraph& parent, const std::vector<int>& edges) {
  std::set<int> vs;
  for (int ei : edges) {
    vs.insert(parent.edges[ei].u);
    vs.insert(parent.edges[ei].v);
  }
  return vs;
}

BigInt falling_factorial(long n, long k) {
  BigInt r = 1;
  for (long i = 0; i < k; ++i) r *= BigInt(n - i);
  return r < 0 ? BigInt(0) : r;
}

BigInt rising_factorial(long n, long k) {
  if (k > 0 && n <= 0) return 0;
  BigInt r = 1;
  for (long i = 0; i < k; ++i) r *= BigInt(n + i);
  return r;
}

// Shared core of ins and insrr: the count only depends on how many matching
// vertices and edges the target offers.
BigInt placement_count(const GraphRegistry& reg, const Monomial& gamma,
                       const std::map<int, long>& vertex_counts,
                       const std::map<int, long>& edge_counts) {
  std::map<int, long> need_vertex, need_edge;
  for (GraphId id : gamma) {
    const auto& info = reg.rec(id).info;
    if (info.kind == Amplitude::Kind::Vertex)
      need_vertex[info.residue_index] += 1;
    else if (info.kind == Amplitude::Kind::Edge)
      need_edge[info.residue_index] += 1;
    else
      return 0; // pure quantum corrections are not insertable
  }
  BigInt total = 1;
  for (auto [r, k] : need_vertex) {
    auto it = vertex_counts.find(r);
    long n = it == vertex_counts.end() ? 0 : it->second;
    if (n < k) return 0;
    total *= falling_factorial(n, k);
  }
  for (auto [t, k] : need_edge) {
    auto it = edge_counts.find(t);
    long m = it == edge_counts.end() ? 0 : it->second;
    total *= rising_factorial(m, k);
    if (total == 0) return 0;
  }
  return total;
}

} // namespace

FeynmanGraph induced_subgraph(const FeynmanGraph& parent, const std::vector<int>& edges) {
  FeynmanGraph g;
  g.theory = parent.theory;
  std::set<int> vs = vertices_of(parent, edges);
  std::map<int, int> vmap;
  for (int v : vs) {
    vmap[v] = g.num_vertices();
    g.vertex_residues.push_back(parent.vertex_residues[v]);
  }
  std::set<int> inside(edges.begin(), edges.end());
  for (int ei : edges) {
    const auto& e = parent.edges[ei];
    g.edges.push_back({vmap[e.u], vmap[e.v], e.residue});
  }
  struct Stub {
    int residue, dir, vertex;
  };
  std::vector<Stub> stubs;
  for (const SlotToken& t : boundary_slots(parent, vs, inside)) {
    int pv = t.is_leg ? parent.legs[t.leg_index].vertex
                      : (t.end == 0 ? parent.edges[t.edge_index].u
                                    : parent.edges[t.edge_index].v);
    stubs.push_back({t.residue, t.dir, vmap[pv]});
  }
  std::sort(stubs.begin(), stubs.end(), [](const Stub& a, const Stub& b) {
    return std::tie(a.residue, a.dir, a.vertex) < std::tie(b.residue, b.dir, b.vertex);
  });
  int port = 0;
  for (const Stub& s : stubs) g.legs.push_back({s.vertex, s.residue, s.dir, port++});
  g.normalize_edges();
  return g;
}

DivergentSubgraphs divergent_subgraphs(const FeynmanGraph& g) {
  DivergentSubgraphs out;
  const int ne = g.num_edges();
  if (ne > 24)
    fail(ErrorCode::ResourceCap, "subgraph scan over " + std::to_string(ne) + " edges");

  std::set<Amplitude> seen_obstructions;
  std::vector<int> uf(std::max(ne, 1));

  for (long mask = 0; mask < (1L << ne); ++mask) {
    std::vector<int> chosen;
    for (int i = 0; i < ne; ++i)
      if (mask & (1L << i)) chosen.push_back(i);

    std::map<int, int> vertex_rep;
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (uf[x] != x) x = uf[x] = uf[uf[x]];
      return x;
    };
    for (int ei : chosen) {
      for (int v : {g.edges[ei].u, g.edges[ei].v}) {
        auto it = vertex_rep.find(v);
        if (it == vertex_rep.end())
          vertex_rep[v] = ei;
        else
          uf[find(it->second)] = find(ei);
      }
    }
    std::map<int, std::vector<int>> comps;
    for (int ei : chosen) comps[find(ei)].push_back(ei);

    bool valid = true;
    SubgraphSelection sel;
    for (auto& [root, comp] : comps) {
      FeynmanGraph sub = induced_subgraph(g, comp);
      if (!is_one_pi(sub) || sdd(sub) < 0) {
        valid = false;
        break;
      }
      Amplitude res = residue_of(sub);
      AmplitudeInfo info = g.theory->classify_amplitude(res);
      bool in_residue_set = info.kind != Amplitude::Kind::PureQuantum;
      if (info.kind == Amplitude::Kind::Vertex) {
        std::vector<int> legs;
        for (auto [e, d] : res.legs) legs.push_back(e);
        if (g.theory->vertex_residues_with_legs(legs).size() > 1) in_residue_set = false;
      }
      if (!in_residue_set) {
        if (seen_obstructions.insert(res).second) out.obstructions.push_back(res);
        valid = false;
        break;
      }
      sel.components.push_back(comp);
    }
    if (valid) out.selections.push_back(std::move(sel));
  }
  return out;
}

namespace {

struct TaggedGraph {
  FeynmanGraph g;
  std::vector<long> tags;
};

void contract_vertex_components(TaggedGraph& tg,
                                const std::vector<std::pair<std::vector<long>, int>>& comps) {
  const FeynmanGraph& g = tg.g;
  std::map<long, int> tag_to_index;
  for (int i = 0; i < g.num_edges(); ++i) tag_to_index[tg.tags[i]] = i;

  std::set<int> dropped_edges;
  std::vector<std::set<int>> comp_vertices;
  for (const auto& [tags, res] : comps) {
    std::vector<int> edges;
    for (long t : tags) edges.push_back(tag_to_index.at(t));
    comp_vertices.push_back(vertices_of(g, edges));
    for (int ei : edges) dropped_edges.insert(ei);
  }

  FeynmanGraph out;
  out.theory = g.theory;
  std::vector<long> out_tags;
  std::vector<int> vmap(g.num_vertices(), -1);
  for (int v = 0; v < g.num_vertices(); ++v) {
    bool inside = false;
    for (const auto& cv : comp_vertices) inside = inside || cv.count(v);
    if (!inside) {
      vmap[v] = out.num_vertices();
      out.vertex_residues.push_back(g.vertex_residues[v]);
    }
  }
  for (std::size_t c = 0; c < comps.size(); ++c) {
    int nv = out.num_vertices();
    out.vertex_residues.push_back(comps[c].second);
    for (int v : comp_vertices[c]) vmap[v] = nv;
  }
  for (int ei = 0; ei < g.num_edges(); ++ei) {
    if (dropped_edges.count(ei)) continue;
    const auto& e = g.edges[ei];
    out.edges.push_back({vmap[e.u], vmap[e.v], e.residue});
    out_tags.push_back(tg.tags[ei]);
  }
  for (const auto& l : g.legs)
    out.legs.push_back({vmap[l.vertex], l.residue, l.dir, l.port});
  tg.g = std::move(out);
  tg.tags = std::move(out_tags);
}

void contract_edge_component(TaggedGraph& tg, const std::vector<long>& tags,
                             long& next_tag) {
  const FeynmanGraph& g = tg.g;
  std::map<long, int> tag_to_index;
  for (int i = 0; i < g.num_edges(); ++i) tag_to_index[tg.tags[i]] = i;
  std::vector<int> edges;
  for (long t : tags) edges.push_back(tag_to_index.at(t));
  std::set<int> inside(edges.begin(), edges.end());
  std::set<int> vs = vertices_of(g, edges);

  auto slots = boundary_slots(g, vs, inside);
  if (slots.size() != 2)
    fail(ErrorCode::IllFormedHopf, "edge-residue component with " +
                                       std::to_string(slots.size()) + " boundary slots");
  const SlotToken& s0 = slots[0];
  const SlotToken& s1 = slots[1];
  int residue = s0.residue;
  bool oriented = g.theory->edges.at(residue).oriented;

  if (!s0.is_leg && !s1.is_leg && s0.edge_index == s1.edge_index)
    fail(ErrorCode::IllFormedHopf,
         "contraction would create a vertex-free loop (vacuum component)");

  FeynmanGraph out;
  out.theory = g.theory;
  std::vector<long> out_tags;
  std::vector<int> vmap(g.num_vertices(), -1);
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (vs.count(v)) continue;
    vmap[v] = out.num_vertices();
    out.vertex_residues.push_back(g.vertex_residues[v]);
  }
  std::set<int> consumed(inside);
  if (!s0.is_leg) consumed.insert(s0.edge_index);
  if (!s1.is_leg) consumed.insert(s1.edge_index);
  for (int ei = 0; ei < g.num_edges(); ++ei) {
    if (consumed.count(ei)) continue;
    const auto& e = g.edges[ei];
    out.edges.push_back({vmap[e.u], vmap[e.v], e.residue});
    out_tags.push_back(tg.tags[ei]);
  }
  std::set<int> consumed_legs;
  if (s0.is_leg) consumed_legs.insert(s0.leg_index);
  if (s1.is_leg) consumed_legs.insert(s1.leg_index);
  for (int li = 0; li < g.num_legs(); ++li) {
    if (consumed_legs.count(li)) continue;
    const auto& l = g.legs[li];
    out.legs.push_back({vmap[l.vertex], l.residue, l.dir, l.port});
  }

  auto far_vertex = [&](const SlotToken& s) {
    const auto& e = g.edges[s.edge_index];
    return s.end == 0 ? e.v : e.u;
  };

  if (!s0.is_leg && !s1.is_leg) {
    int u, v;
    if (oriented && s0.dir == +1) {
      // s0 leaves the component, so flow runs far(s1) -> component -> far(s0)
      u = vmap[far_vertex(s1)];
      v = vmap[far_vertex(s0)];
    } else if (oriented) {
      u = vmap[far_vertex(s0)];
      v = vmap[far_vertex(s1)];
    } else {
      u = vmap[far_vertex(s0)];
      v = vmap[far_vertex(s1)];
    }
    out.edges.push_back({u, v, residue});
    out_tags.push_back(next_tag++);
  } else if (s0.is_leg != s1.is_leg) {
    const SlotToken& leg_slot = s0.is_leg ? s0 : s1;
    const SlotToken& edge_slot = s0.is_leg ? s1 : s0;
    const auto& l = g.legs[leg_slot.leg_index];
    out.legs.push_back({vmap[far_vertex(edge_slot)], l.residue, l.dir, l.port});
  } else {
    fail(ErrorCode::IllFormedHopf,
         "contracting a component that is a whole connected graph");
  }
  // edges stay unsorted here: tags and edge indices must remain in sync
  tg.g = std::move(out);
  tg.tags = std::move(out_tags);
}

} // namespace

FeynmanGraph contract(const FeynmanGraph& g, const SubgraphSelection& selection) {
  if (selection.components.empty()) return g;

  std::size_t covered = 0;
  for (const auto& comp : selection.components) covered += comp.size();
  if (covered == std::size_t(g.num_edges()) && g.is_connected() &&
      selection.components.size() == 1 && g.num_edges() > 0 &&
      int(vertices_of(g, selection.components[0]).size()) == g.num_vertices()) {
    return empty_graph(g.theory);
  }

  std::vector<std::pair<std::vector<long>, int>> vertex_comps;
  std::vector<std::vector<long>> edge_comps;
  for (const auto& comp : selection.components) {
    FeynmanGraph sub = induced_subgraph(g, comp);
    Amplitude res = residue_of(sub);
    AmplitudeInfo info = g.theory->classify_amplitude(res);
    std::vector<long> tags(comp.begin(), comp.end());
    if (info.kind == Amplitude::Kind::Vertex) {
      std::vector<int> legs;
      for (auto [e, d] : res.legs) legs.push_back(e);
      if (g.theory->vertex_residues_with_legs(legs).size() > 1)
        fail(ErrorCode::IllFormedHopf,
             "component residue matches several vertex residues");
      vertex_comps.emplace_back(tags, info.residue_index);
    } else if (info.kind == Amplitude::Kind::Edge) {
      edge_comps.push_back(tags);
    } else {
      fail(ErrorCode::IllFormedHopf,
           "component residue '" + amplitude_to_string(*g.theory, res) +
               "' lies outside the residue set");
    }
  }

  TaggedGraph tg;
  tg.g = g;
  tg.tags.resize(g.num_edges());
  std::iota(tg.tags.begin(), tg.tags.end(), 0);
  long next_tag = g.num_edges();
  if (!vertex_comps.empty()) contract_vertex_components(tg, vertex_comps);
  for (const auto& tags : edge_comps) contract_edge_component(tg, tags, next_tag);
  tg.g.normalize_edges();
  return tg.g;
}

BigInt ins_count(const GraphRegistry& reg, const Monomial& gamma,
                 const FeynmanGraph& target) {
  std::map<int, long> vertex_counts, edge_counts;
  for (int r : target.vertex_residues) vertex_counts[r] += 1;
  for (const auto& e : target.edges) edge_counts[e.residue] += 1;
  return placement_count(reg, gamma, vertex_counts, edge_counts);
}

BigInt insrr_count(const GraphRegistry& reg, const Monomial& gamma,
                   const Amplitude& amplitude, const std::vector<long>& resgrd) {
  const TheorySpec& t = reg.theory();
  std::vector<long> n(resgrd);
  AmplitudeInfo info = t.classify_amplitude(amplitude);
  if (info.kind == Amplitude::Kind::Vertex) n[info.residue_index] += 1;
  for (long c : n)
    if (c < 0) return 0;
  std::map<int, long> vertex_counts, edge_counts;
  for (int r = 0; r < t.num_vertex_residues(); ++r)
    if (n[r] > 0) vertex_counts[r] = n[r];
  std::map<int, long> slots;
  for (int r = 0; r < t.num_vertex_residues(); ++r)
    for (int e : t.vertices[r].legs) slots[e] += n[r];
  std::map<int, long> ext;
  for (auto [e, d] : amplitude.legs) ext[e] += 1;
  for (auto [e, x] : ext)
    if (!slots.count(e) || slots[e] < x) return 0;
  for (auto [e, s] : slots) {
    long x = ext.count(e) ? ext[e] : 0;
    long m = s - x;
    if (m < 0 || m % 2 != 0) return 0;
    if (m > 0) edge_counts[e] = m / 2;
  }
  return placement_count(reg, gamma, vertex_counts, edge_counts);
}

BigInt isoemb_count(GraphRegistry& reg, const Monomial& gamma,
                    const FeynmanGraph& parent, const FeynmanGraph* cograph) {
  if (gamma.empty()) return 1;
  CanonicalForm cogkey;
  if (cograph) cogkey = canonicalize(*cograph);
  BigInt count = 0;
  for (const auto& sel : divergent_subgraphs(parent).selections) {
    if (sel.components.empty()) continue;
    Monomial m;
    for (const auto& comp : sel.components)
      m.push_back(reg.intern(induced_subgraph(parent, comp)));
    std::sort(m.begin(), m.end());
    if (m != gamma) continue;
    if (cograph && canonicalize(contract(parent, sel)) != cogkey) continue;
    count += 1;
  }
  return count;
}

namespace {

// --- insertion executor -----------------------------------------------------
//
// A placement assigns vertex-type components to distinct host vertices and
// propagator-type components to host edges as ordered chains. Executing a
// placement requires a gluing: a bijection between component legs and the
// attachments of the replaced vertex, and an orientation for every chain
// element. insaut counts the placements for which some gluing reproduces the
// requested result graph.

struct Placement {
  // vertex index -> component class inserted there
  std::map<int, GraphId> at_vertex;
  // edge index -> ordered chain of component classes
  std::map<int, std::vector<GraphId>> at_edge;
};

struct HalfRef {
  // attachment of a host slot: edge end or leg
  bool is_leg = false;
  int edge = -1, end = 0, leg = -1;
};

FeynmanGraph execute(const GraphRegistry& reg, const FeynmanGraph& host,
                     const Placement& p,
                     const std::map<int, std::vector<int>>& vertex_gluing,
                     const std::map<int, std::vector<int>>& chain_flip) {
  // Build on a half-edge soup: start from host, replace vertices and edges.
  FeynmanGraph out;
  out.theory = host.theory;

  // vertex map for surviving host vertices
  std::vector<int> vmap(host.num_vertices(), -1);
  for (int v = 0; v < host.num_vertices(); ++v) {
    if (p.at_vertex.count(v)) continue;
    vmap[v] = out.num_vertices();
    out.vertex_residues.push_back(host.vertex_residues[v]);
  }
  // component vertex blocks
  std::map<int, int> vertex_comp_base; // host vertex -> base index of its comp block
  for (const auto& [v, id] : p.at_vertex) {
    const FeynmanGraph& comp = reg.rec(id).graph;
    vertex_comp_base[v] = out.num_vertices();
    for (int r : comp.vertex_residues) out.vertex_residues.push_back(r);
    for (const auto& e : comp.edges)
      out.edges.push_back({vertex_comp_base[v] + e.u, vertex_comp_base[v] + e.v, e.residue});
  }

  // attachments of a replaced host vertex, in a fixed order
  auto attachments = [&](int v) {
    std::vector<HalfRef> list;
    for (int ei = 0; ei < host.num_edges(); ++ei) {
      if (host.edges[ei].u == v) list.push_back({false, ei, 0, -1});
      if (host.edges[ei].v == v) list.push_back({false, ei, 1, -1});
    }
    for (int li = 0; li < host.num_legs(); ++li)
      if (host.legs[li].vertex == v) list.push_back({true, -1, 0, li});
    return list;
  };

  // resolves which out-vertex a host half-edge endpoint lands on
  std::function<int(int, int)> resolve_end = [&](int ei, int end) -> int {
    int v = end == 0 ? host.edges[ei].u : host.edges[ei].v;
    if (!p.at_vertex.count(v)) return vmap[v];
    // glued into component: find the comp leg bound to this attachment
    const FeynmanGraph& comp = reg.rec(p.at_vertex.at(v)).graph;
    auto list = attachments(v);
    const std::vector<int>& glue = vertex_gluing.at(v); // attachment i -> comp leg
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list[i].is_leg && list[i].edge == ei && list[i].end == end)
        return vertex_comp_base.at(v) + comp.legs[glue[i]].vertex;
    }
    fail(ErrorCode::SemanticError, "internal: unresolved attachment");
  };

  // host legs: either kept (vertex survives) or re-homed into a component
  for (int li = 0; li < host.num_legs(); ++li) {
    const auto& l = host.legs[li];
    int target;
    if (!p.at_vertex.count(l.vertex)) {
      target = vmap[l.vertex];
    } else {
      const FeynmanGraph& comp = reg.rec(p.at_vertex.at(l.vertex)).graph;
      auto list = attachments(l.vertex);
      const std::vector<int>& glue = vertex_gluing.at(l.vertex);
      target = -1;
      for (std::size_t i = 0; i < list.size(); ++i)
        if (list[i].is_leg && list[i].leg == li)
          target = vertex_comp_base.at(l.vertex) + comp.legs[glue[i]].vertex;
      if (target < 0) fail(ErrorCode::SemanticError, "internal: lost leg");
    }
    out.legs.push_back({target, l.residue, l.dir, l.port});
  }

  // host edges: either plain (re-resolved endpoints) or expanded into chains
  for (int ei = 0; ei < host.num_edges(); ++ei) {
    const auto& e = host.edges[ei];
    int a = resolve_end(ei, 0);
    int b = resolve_end(ei, 1);
    auto chain_it = p.at_edge.find(ei);
    if (chain_it == p.at_edge.end()) {
      out.edges.push_back({a, b, e.residue});
      continue;
    }
    const auto& chain = chain_it->second;
    const auto& flips = chain_flip.at(ei);
    int prev = a;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const FeynmanGraph& comp = reg.rec(chain[k]).graph;
      int base = out.num_vertices();
      for (int r : comp.vertex_residues) out.vertex_residues.push_back(r);
      for (const auto& ce : comp.edges)
        out.edges.push_back({base + ce.u, base + ce.v, ce.residue});
      // the two legs of a propagator component; flip selects which faces a
      int legA = 0, legB = 1;
      if (comp.theory->edges.at(e.residue).oriented) {
        // incoming leg faces the initial side
        legA = comp.legs[0].dir < 0 ? 0 : 1;
        legB = 1 - legA;
      } else if (flips[k]) {
        std::swap(legA, legB);
      }
      out.edges.push_back({prev, base + comp.legs[legA].vertex, e.residue});
      prev = base + comp.legs[legB].vertex;
    }
    out.edges.push_back({prev, b, e.residue});
  }
  out.normalize_edges();
  return out;
}

// Enumerates gluings for one replaced vertex: bijections between the vertex's
// attachments and the component's legs, respecting residue and direction.
// Attachment directions: edge end 0 of an oriented edge carries flow out of
// the vertex (+1), end 1 into it (-1); the replacing component leg must carry
// the same flow.
std::vector<std::vector<int>> vertex_gluings(const GraphRegistry& reg,
                                             const FeynmanGraph& host, int v,
                                             GraphId comp_id) {
  const FeynmanGraph& comp = reg.rec(comp_id).graph;
  std::vector<std::pair<int, int>> att_type; // (residue, dir)
  std::vector<HalfRef> list;
  for (int ei = 0; ei < host.num_edges(); ++ei) {
    const auto& e = host.edges[ei];
    bool oriented = host.theory->edges.at(e.residue).oriented;
    if (e.u == v) att_type.emplace_back(e.residue, oriented ? +1 : 0);
    if (e.u == v) list.push_back({});
    if (e.v == v) att_type.emplace_back(e.residue, oriented ? -1 : 0);
    if (e.v == v) list.push_back({});
  }
  for (const auto& l : host.legs)
    if (l.vertex == v) att_type.emplace_back(l.residue, l.dir);

  std::size_t n = att_type.size();
  if (n != comp.legs.size()) return {};
  std::vector<std::vector<int>> result;
  std::vector<int> glue(n, -1);
  std::vector<bool> used(n, false);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      result.push_back(glue);
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (comp.legs[j].residue != att_type[i].first) continue;
      if (comp.legs[j].dir != att_type[i].second) continue;
      used[j] = true;
      glue[i] = int(j);
      rec(i + 1);
      used[j] = false;
    }
  };
  rec(0);
  return result;
}

} // namespace

BigInt insaut_count(GraphRegistry& reg, const Monomial& gamma,
                    const FeynmanGraph& host, const FeynmanGraph& result) {
  if (gamma.empty())
    return canonicalize(host) == canonicalize(result) ? 1 : 0;
  if (host.empty()) {
    // re-inserting into the unit: the only candidate outcome is gamma itself
    return gamma == Monomial{reg.intern(result)} ? 1 : 0;
  }

  CanonicalForm target_key = canonicalize(result);

  // split gamma into vertex-type and propagator-type instances
  std::vector<GraphId> vertex_insts, prop_insts;
  for (GraphId id : gamma) {
    const auto& info = reg.rec(id).info;
    if (info.kind == Amplitude::Kind::Vertex)
      vertex_insts.push_back(id);
    else if (info.kind == Amplitude::Kind::Edge)
      prop_insts.push_back(id);
    else
      return 0;
  }

  BigInt count = 0;

  // all unlabeled placements: assign sorted instance lists; skipping
  // duplicate assignments for equal instances keeps placements unlabeled
  std::vector<int> vtarget(vertex_insts.size(), -1);
  std::vector<int> etarget(prop_insts.size(), -1);

  std::function<void(std::size_t)> place_props;
  std::function<void(std::size_t)> place_vertices;

  auto try_placement = [&]() {
    Placement p;
    for (std::size_t i = 0; i < vertex_insts.size(); ++i)
      p.at_vertex[vtarget[i]] = vertex_insts[i];
    std::map<int, std::vector<GraphId>> base_chains;
    for (std::size_t i = 0; i < prop_insts.size(); ++i)
      base_chains[etarget[i]].push_back(prop_insts[i]);

    // expand chain orders: distinct permutations per edge
    std::vector<std::pair<int, std::vector<GraphId>>> chains(base_chains.begin(),
                                                             base_chains.end());
    for (auto& [e, c] : chains) std::sort(c.begin(), c.end());

    std::function<bool(std::size_t, Placement&)> with_orders =
        [&](std::size_t ci, Placement& pl) -> bool {
      if (ci == chains.size()) {
        // iterate gluings
        std::vector<int> vlist;
        for (const auto& [v, id] : pl.at_vertex) vlist.push_back(v);
        std::vector<std::vector<std::vector<int>>> gluings;
        for (int v : vlist) {
          gluings.push_back(vertex_gluings(reg, host, v, pl.at_vertex.at(v)));
          if (gluings.back().empty()) return false;
        }
        std::map<int, std::vector<int>> flip;
        for (const auto& [e, c] : pl.at_edge) flip[e] = std::vector<int>(c.size(), 0);

        std::function<bool(std::size_t, std::map<int, std::vector<int>>&)> glue_rec =
            [&](std::size_t vi, std::map<int, std::vector<int>>& vg) -> bool {
          if (vi == vlist.size()) {
            // iterate chain flips
            std::vector<std::pair<int, int>> flip_slots; // (edge, position)
            for (auto& [e, f] : flip)
              for (std::size_t k = 0; k < f.size(); ++k) {
                int res = host.edges[e].residue;
                if (!host.theory->edges.at(res).oriented)
                  flip_slots.emplace_back(e, int(k));
              }
            long total = 1L << flip_slots.size();
            for (long m = 0; m < total; ++m) {
              for (std::size_t s = 0; s < flip_slots.size(); ++s)
                flip[flip_slots[s].first][flip_slots[s].second] = (m >> s) & 1;
              FeynmanGraph candidate = execute(reg, host, pl, vg, flip);
              if (canonicalize(candidate) == target_key) return true;
            }
            return false;
          }
          for (const auto& g : gluings[vi]) {
            vg[vlist[vi]] = g;
            if (glue_rec(vi + 1, vg)) return true;
          }
          return false;
        };
        std::map<int, std::vector<int>> vg;
        return glue_rec(0, vg);
      }
      auto& [e, c] = chains[ci];
      std::vector<GraphId> perm = c;
      bool any = false;
      do {
        pl.at_edge[e] = perm;
        if (with_orders(ci + 1, pl)) return true;
      } while (std::next_permutation(perm.begin(), perm.end()));
      pl.at_edge.erase(e);
      return any;
    };

    Placement pl = p;
    pl.at_edge.clear();
    if (with_orders(0, pl)) count += 1;
  };

  place_props = [&](std::size_t i) {
    if (i == prop_insts.size()) {
      try_placement();
      return;
    }
    int start = (i > 0 && prop_insts[i] == prop_insts[i - 1]) ? etarget[i - 1] : 0;
    for (int e = start; e < host.num_edges(); ++e) {
      if (host.edges[e].residue != reg.rec(prop_insts[i]).info.residue_index) continue;
      etarget[i] = e;
      place_props(i + 1);
    }
  };

  place_vertices = [&](std::size_t i) {
    if (i == vertex_insts.size()) {
      place_props(0);
      return;
    }
    int start = (i > 0 && vertex_insts[i] == vertex_insts[i - 1]) ? vtarget[i - 1] + 1 : 0;
    for (int v = start; v < host.num_vertices(); ++v) {
      if (host.vertex_residues[v] != reg.rec(vertex_insts[i]).info.residue_index) continue;
      bool taken = false;
      for (std::size_t k = 0; k < i; ++k) taken = taken || vtarget[k] == v;
      if (taken) continue;
      vtarget[i] = v;
      place_vertices(i + 1);
    }
  };

  place_vertices(0);

  // placements above treat identical instances as one; the insertion count
  // is over labeled instances, each class lifting by its multiplicity
  // factorial (the same factor Sym carries for identical components)
  std::size_t i = 0;
  while (i < gamma.size()) {
    std::size_t j = i;
    while (j < gamma.size() && gamma[j] == gamma[i]) ++j;
    count *= BigInt(factorial_i64(int(j - i)));
    i = j;
  }
  return count;
}

InsertionCount insertion_counts(GraphRegistry& reg, const Monomial& gamma,
                                const FeynmanGraph& target, const FeynmanGraph* result) {
  InsertionCount out;
  if (gamma.empty()) {
    out.ins = out.insaut = out.insrr = out.isoemb = 1;
    return out;
  }
  out.ins = ins_count(reg, gamma, target);
  Gradings grd = gradings_of(target);
  out.insrr = insrr_count(reg, gamma, residue_of(target), grd.residue);
  if (result) {
    out.insaut = insaut_count(reg, gamma, target, *result);
    out.isoemb = isoemb_count(reg, gamma, *result);
  }
  return out;
}

Lemma12Report verify_lemma12(GraphRegistry& reg, const FeynmanGraph& g) {
  Lemma12Report report;
  Rational lhs = Rational(1) / Rational(symmetry_factor(g));
  for (const auto& sel : divergent_subgraphs(g).selections) {
    Monomial gamma;
    for (const auto& comp : sel.components)
      gamma.push_back(reg.intern(induced_subgraph(g, comp)));
    std::sort(gamma.begin(), gamma.end());
    FeynmanGraph cograph = contract(g, sel);

    Rational sym_gamma = reg.monomial_sym(gamma);
    Rational sym_cograph = Rational(symmetry_factor(cograph));
    BigInt insaut = gamma.empty() ? BigInt(1) : insaut_count(reg, gamma, cograph, g);
    BigInt isoemb = gamma.empty() ? BigInt(1) : isoemb_count(reg, gamma, g, &cograph);

    bool ok = isoemb != 0 &&
              lhs == Rational(insaut) / Rational(isoemb) / (sym_gamma * sym_cograph);
    if (!ok) {
      report.holds = false;
      report.witnesses.push_back(graph_display_name(g) + " / " +
                                 reg.monomial_to_string(gamma));
    }
  }
  return report;
}

} // namespace hopfren

#include "hopfren/registry.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace hopfren {

namespace {

// number of pinned classes in the unpinned class of g: distinct canonical
// forms over the port assignments that respect leg residue and direction
std::int64_t count_labelings(const FeynmanGraph& g) {
  if (g.num_legs() <= 1) return 1;
  // group leg slots by (residue, dir); ports permute within a group
  std::vector<int> order(g.num_legs());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& la = g.legs[a];
    const auto& lb = g.legs[b];
    return std::tie(la.residue, la.dir, a) < std::tie(lb.residue, lb.dir, b);
  });
  std::vector<int> ports(g.num_legs());
  for (int i = 0; i < g.num_legs(); ++i) ports[i] = g.legs[order[i]].port;
  std::sort(ports.begin(), ports.end());

  std::set<CanonicalForm> keys;
  std::vector<int> perm = ports;
  do {
    // a port may only move between legs of the same (residue, dir)
    bool valid = true;
    for (int i = 0; i < g.num_legs() && valid; ++i) {
      int j = int(std::find(ports.begin(), ports.end(), perm[i]) - ports.begin());
      const auto& a = g.legs[order[i]];
      const auto& b = g.legs[order[j]];
      valid = a.residue == b.residue && a.dir == b.dir;
    }
    if (!valid) continue;
    FeynmanGraph h = g;
    for (int i = 0; i < g.num_legs(); ++i) h.legs[order[i]].port = perm[i];
    keys.insert(canonicalize(h));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::int64_t(keys.size());
}

} // namespace

GraphId GraphRegistry::intern(const FeynmanGraph& g) {
  if (g.empty())
    fail(ErrorCode::SemanticError, "the empty graph is the unit, not a generator");
  CanonicalForm key = canonicalize_unpinned(g);
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;

  GraphRecord rec;
  rec.graph = canonical_graph(g);
  rec.unpinned_key = key;
  rec.name = graph_display_name(g);
  rec.loop = loop_number(g);
  Gradings grd = gradings_of(g);
  rec.resgrd = grd.residue;
  rec.cplgrd = grd.coupling;
  rec.sdd_value = sdd(g);
  rec.divergent = rec.sdd_value >= 0;
  rec.sym = symmetry_factor(g);
  rec.labelings = count_labelings(g);
  rec.info = theory_->classify_amplitude(residue_of(g));

  GraphId id = GraphId(records_.size());
  records_.push_back(std::move(rec));
  ids_.emplace(std::move(key), id);
  return id;
}

const GraphRecord& GraphRegistry::rec(GraphId id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return records_.at(id);
}

int GraphRegistry::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return int(records_.size());
}

long GraphRegistry::monomial_loop(const Monomial& m) const {
  long loop = 0;
  for (GraphId id : m) loop += rec(id).loop;
  return loop;
}

std::vector<long> GraphRegistry::monomial_resgrd(const Monomial& m) const {
  std::vector<long> out(theory_->num_vertex_residues(), 0);
  for (GraphId id : m) {
    const auto& r = rec(id).resgrd;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += r[i];
  }
  return out;
}

std::vector<long> GraphRegistry::monomial_cplgrd(const Monomial& m) const {
  std::vector<long> out(theory_->num_couplings(), 0);
  for (GraphId id : m) {
    const auto& c = rec(id).cplgrd;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i];
  }
  return out;
}

bool GraphRegistry::monomial_divergent(const Monomial& m) const {
  return std::all_of(m.begin(), m.end(),
                     [this](GraphId id) { return rec(id).divergent; });
}

Rational GraphRegistry::monomial_labelings(const Monomial& m) const {
  Rational out = 1;
  for (GraphId id : m) out *= Rational(rec(id).labelings);
  return out;
}

Rational GraphRegistry::monomial_sym(const Monomial& m) const {
  Rational sym = 1;
  std::size_t i = 0;
  while (i < m.size()) {
    std::size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    long k = long(j - i);
    sym *= Rational(rec(m[i]).sym);
    // pow(sym, k) and k! for interchangeable identical components
    for (long p = 1; p < k; ++p) sym *= Rational(rec(m[i]).sym);
    for (long p = 2; p <= k; ++p) sym *= p;
    i = j;
  }
  return sym;
}

std::string GraphRegistry::monomial_to_string(const Monomial& m) const {
  if (m.empty()) return "1";
  std::string out = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ",";
    out += rec(m[i]).name;
  }
  out += "]";
  return out;
}

} // namespace hopfren

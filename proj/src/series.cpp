#include "hopfren/series.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace hopfren {

TruncatedSeries truncate(HopfElement x, int cap) {
  if (cap < 0) fail(ErrorCode::SemanticError, "series cap must be >= 0");
  TruncatedSeries s;
  s.cap = cap;
  s.element.reg = x.reg;
  for (const auto& [m, c] : x.terms)
    if (x.reg->monomial_loop(m) <= cap) s.element.add_term(m, c);
  return s;
}

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) {
  return truncate(a.element + b.element, std::min(a.cap, b.cap));
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  return truncate(a.element * b.element, std::min(a.cap, b.cap));
}

TruncatedSeries series_pow(const TruncatedSeries& base, const Rational& exponent) {
  if (base.element.counit() != 1)
    fail(ErrorCode::SemanticError,
         "formal powers need a series with unit coefficient exactly 1");
  RegistryPtr reg = base.element.reg;
  HopfElement aug = augmentation_projection(base.element); // loop >= 1 per term
  HopfElement power = HopfElement::unit(reg);
  HopfElement running = HopfElement::unit(reg);
  for (int n = 1; n <= base.cap; ++n) {
    running = truncate(running * aug, base.cap).element;
    if (running.is_zero()) break;
    power += running * rational_binomial(exponent, unsigned(n));
  }
  TruncatedSeries out;
  out.cap = base.cap;
  out.element = std::move(power);
  return out;
}

TruncatedSeries green_function(HopfAlgebra& alg, const Amplitude& amplitude, int cap) {
  if (cap < 0) fail(ErrorCode::SemanticError, "series cap must be >= 0");
  RegistryPtr reg = alg.registry();
  AmplitudeInfo info = alg.theory().classify_amplitude(amplitude);

  HopfElement sum(reg);
  for (int loops = 1; loops <= cap; ++loops)
    for (GraphId id : alg.generators(amplitude, loops)) {
      const auto& rec = reg->rec(id);
      sum.add_term({id}, Rational(rec.labelings) / Rational(rec.sym));
    }

  TruncatedSeries out;
  out.cap = cap;
  switch (info.kind) {
    case Amplitude::Kind::Vertex:
      out.element = HopfElement::unit(reg) + sum;
      break;
    case Amplitude::Kind::Edge:
      out.element = HopfElement::unit(reg) - sum;
      break;
    case Amplitude::Kind::PureQuantum:
      out.element = sum;
      break;
  }
  return out;
}

TruncatedSeries barred(const TruncatedSeries& s) {
  TruncatedSeries out;
  out.cap = s.cap;
  out.element = divergent_projection(s.element);
  return out;
}

TruncatedSeries charge(HopfAlgebra& alg, int vertex_residue, int cap) {
  const TheorySpec& t = alg.theory();
  TruncatedSeries q = green_function(alg, Amplitude::of_vertex(t, vertex_residue), cap);
  for (int e : t.vertices.at(vertex_residue).legs) {
    TruncatedSeries edge = green_function(alg, Amplitude::of_edge(t, e), cap);
    q = series_mul(q, series_pow(edge, Rational(-1, 2)));
  }
  return q;
}

TruncatedSeries charge_power(HopfAlgebra& alg, const std::vector<long>& multi, int cap) {
  TruncatedSeries out;
  out.cap = cap;
  out.element = HopfElement::unit(alg.registry());
  for (int v = 0; v < alg.theory().num_vertex_residues(); ++v) {
    if (multi.at(v) == 0) continue;
    out = series_mul(out, series_pow(charge(alg, v, cap), Rational(multi[v])));
  }
  return out;
}

TruncatedSeries charge_power(HopfAlgebra& alg, int vertex_residue,
                             const Rational& exponent, int cap) {
  return series_pow(charge(alg, vertex_residue, cap), exponent);
}

namespace {

// barred charge built from divergent-projected factors; the projection is an
// algebra morphism, so this equals projecting the charge itself
TruncatedSeries barred_charge(HopfAlgebra& alg, int vertex_residue, int cap) {
  const TheorySpec& t = alg.theory();
  TruncatedSeries q =
      barred(green_function(alg, Amplitude::of_vertex(t, vertex_residue), cap));
  for (int e : t.vertices.at(vertex_residue).legs) {
    TruncatedSeries edge = barred(green_function(alg, Amplitude::of_edge(t, e), cap));
    q = series_mul(q, series_pow(edge, Rational(-1, 2)));
  }
  return q;
}

TruncatedSeries barred_charge_multi(HopfAlgebra& alg, const std::vector<long>& multi,
                                    int cap) {
  TruncatedSeries out;
  out.cap = cap;
  out.element = HopfElement::unit(alg.registry());
  for (int v = 0; v < alg.theory().num_vertex_residues(); ++v) {
    if (multi.at(v) == 0) continue;
    out = series_mul(out, series_pow(barred_charge(alg, v, cap), Rational(multi[v])));
  }
  return out;
}

// all divergent generator classes per residue-set amplitude up to a loop cap
std::vector<GraphId> divergent_pool(HopfAlgebra& alg, const std::set<int>& vertex_residues,
                                    const std::set<int>& edge_residues, int cap) {
  std::vector<GraphId> pool;
  const TheorySpec& t = alg.theory();
  for (int v : vertex_residues)
    for (int l = 1; l <= cap; ++l)
      for (GraphId id : alg.generators(Amplitude::of_vertex(t, v), l))
        if (alg.registry()->rec(id).divergent) pool.push_back(id);
  for (int e : edge_residues)
    for (int l = 1; l <= cap; ++l)
      for (GraphId id : alg.generators(Amplitude::of_edge(t, e), l))
        if (alg.registry()->rec(id).divergent) pool.push_back(id);
  return pool;
}

// every non-empty multiset of pool items with total loop <= cap
void for_each_insertable(const GraphRegistry& reg, const std::vector<GraphId>& pool,
                         int cap, const std::function<void(const Monomial&)>& fn) {
  Monomial current;
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long budget) {
    if (i == pool.size()) {
      if (!current.empty()) {
        Monomial sorted = current;
        std::sort(sorted.begin(), sorted.end());
        fn(sorted);
      }
      return;
    }
    long loop = reg.rec(pool[i]).loop;
    long max_k = loop > 0 ? budget / loop : 0;
    for (long k = 0; k <= max_k; ++k) {
      for (long j = 0; j < k; ++j) current.push_back(pool[i]);
      rec(i + 1, budget - k * loop);
      for (long j = 0; j < k; ++j) current.pop_back();
    }
  };
  rec(0, cap);
}

IdentityReport compare_elements(const HopfElement& lhs, const HopfElement& rhs) {
  IdentityReport report;
  if (lhs == rhs) return report;
  report.holds = false;
  HopfElement diff = lhs - rhs;
  report.mismatch = diff.to_text().substr(0, 400);
  return report;
}

IdentityReport compare_tensors(const TensorElement& lhs, const TensorElement& rhs) {
  IdentityReport report;
  if (lhs == rhs) return report;
  report.holds = false;
  TensorElement diff = lhs;
  diff -= rhs;
  report.mismatch = diff.to_text().substr(0, 400);
  return report;
}

} // namespace

IdentityReport verify_insertion_identity(HopfAlgebra& alg, const FeynmanGraph& g,
                                         int cap) {
  RegistryPtr reg = alg.registry();
  const TheorySpec& t = alg.theory();

  std::set<int> vres(g.vertex_residues.begin(), g.vertex_residues.end());
  std::set<int> eres;
  for (const auto& e : g.edges) eres.insert(e.residue);

  HopfElement lhs = HopfElement::unit(reg);
  auto pool = divergent_pool(alg, vres, eres, cap);
  for_each_insertable(*reg, pool, cap, [&](const Monomial& gamma) {
    BigInt ins = ins_count(*reg, gamma, g);
    if (ins == 0) return;
    lhs.add_term(gamma, Rational(ins) * reg->monomial_labelings(gamma) /
                            reg->monomial_sym(gamma));
  });

  TruncatedSeries rhs;
  rhs.cap = cap;
  rhs.element = HopfElement::unit(reg);
  for (int r : g.vertex_residues)
    rhs = series_mul(rhs, barred(green_function(alg, Amplitude::of_vertex(t, r), cap)));
  for (const auto& e : g.edges) {
    TruncatedSeries edge =
        barred(green_function(alg, Amplitude::of_edge(t, e.residue), cap));
    rhs = series_mul(rhs, series_pow(edge, Rational(-1)));
  }
  return compare_elements(lhs, rhs.element);
}

IdentityReport verify_insertable_set_identity(HopfAlgebra& alg,
                                              const Amplitude& amplitude,
                                              const std::vector<long>& resgrd,
                                              int cap) {
  RegistryPtr reg = alg.registry();
  const TheorySpec& t = alg.theory();

  // vertex and edge content determined by (residue, residue-grading)
  std::vector<long> n(resgrd);
  AmplitudeInfo info = t.classify_amplitude(amplitude);
  if (info.kind == Amplitude::Kind::Vertex) n[info.residue_index] += 1;
  bool feasible = true;
  for (long c : n) feasible = feasible && c >= 0;
  std::map<int, long> slots, ext;
  if (feasible) {
    for (int r = 0; r < t.num_vertex_residues(); ++r)
      for (int e : t.vertices[r].legs) slots[e] += n[r];
    for (auto [e, d] : amplitude.legs) ext[e] += 1;
    for (auto [e, x] : ext) feasible = feasible && slots.count(e) && slots[e] >= x;
    if (feasible)
      for (auto [e, s] : slots) {
        long x = ext.count(e) ? ext[e] : 0;
        feasible = feasible && (s - x) >= 0 && (s - x) % 2 == 0;
      }
  }
  if (!feasible) return {}; // no graphs with this (residue, grading): vacuous

  std::set<int> vres, eres;
  for (int r = 0; r < t.num_vertex_residues(); ++r)
    if (n[r] > 0) vres.insert(r);
  for (auto [e, s] : slots) {
    long x = ext.count(e) ? ext[e] : 0;
    if (s - x > 0) eres.insert(e);
  }

  HopfElement lhs = HopfElement::unit(reg);
  auto pool = divergent_pool(alg, vres, eres, cap);
  for_each_insertable(*reg, pool, cap, [&](const Monomial& gamma) {
    BigInt ins = insrr_count(*reg, gamma, amplitude, resgrd);
    if (ins == 0) return;
    lhs.add_term(gamma, Rational(ins) * reg->monomial_labelings(gamma) /
                            reg->monomial_sym(gamma));
  });

  TruncatedSeries rhs;
  rhs.cap = cap;
  rhs.element = HopfElement::unit(reg);
  if (info.kind != Amplitude::Kind::PureQuantum) {
    rhs = series_mul(rhs, barred(green_function(alg, amplitude, cap)));
  } else {
    for (auto [e, d] : amplitude.legs) {
      TruncatedSeries edge = barred(green_function(alg, Amplitude::of_edge(t, e), cap));
      rhs = series_mul(rhs, series_pow(edge, Rational(1, 2)));
    }
  }
  rhs = series_mul(rhs, barred_charge_multi(alg, resgrd, cap));
  return compare_elements(lhs, rhs.element);
}

namespace {

TensorElement tensor_truncated(RegistryPtr reg, const HopfElement& left,
                               const HopfElement& right, int cap) {
  TensorElement out(reg);
  for (const auto& [lm, lc] : left.terms) {
    long lloop = reg->monomial_loop(lm);
    for (const auto& [rm, rc] : right.terms) {
      if (lloop + reg->monomial_loop(rm) > cap) continue;
      out.add_term(lm, rm, lc * rc);
    }
  }
  return out;
}

std::set<std::vector<long>> residue_supports(const GraphRegistry& reg,
                                             const HopfElement& x) {
  std::set<std::vector<long>> out;
  for (const auto& [m, c] : x.terms) out.insert(reg.monomial_resgrd(m));
  return out;
}

} // namespace

IdentityReport verify_coproduct_identity(HopfAlgebra& alg, CoproductIdentityKind kind,
                                         const Amplitude& amplitude,
                                         const Rational& power, int cap,
                                         bool barred_variant, bool restricted_variant) {
  RegistryPtr reg = alg.registry();
  const TheorySpec& t = alg.theory();
  AmplitudeInfo info = t.classify_amplitude(amplitude);

  TruncatedSeries base;
  switch (kind) {
    case CoproductIdentityKind::Green:
      base = green_function(alg, amplitude, cap);
      break;
    case CoproductIdentityKind::Charge:
      if (info.kind != Amplitude::Kind::Vertex)
        fail(ErrorCode::SemanticError, "charges exist for vertex residues only");
      base = charge(alg, info.residue_index, cap);
      break;
    case CoproductIdentityKind::ChargePower:
      if (info.kind != Amplitude::Kind::Vertex)
        fail(ErrorCode::SemanticError, "charges exist for vertex residues only");
      base = charge_power(alg, info.residue_index, power, cap);
      break;
  }

  // head factor of the left tensor legs: Xbar^r, Qbar^v or Qbar^mv
  TruncatedSeries head;
  switch (kind) {
    case CoproductIdentityKind::Green:
      head = barred(green_function(alg, amplitude, cap));
      break;
    case CoproductIdentityKind::Charge:
      head = barred_charge(alg, info.residue_index, cap);
      break;
    case CoproductIdentityKind::ChargePower:
      head = series_pow(barred_charge(alg, info.residue_index, cap), power);
      break;
  }

  auto supports = residue_supports(*reg, base.element);

  std::map<std::vector<long>, HopfElement> left_cache;
  auto left_series = [&](const std::vector<long>& rvec) -> const HopfElement& {
    auto it = left_cache.find(rvec);
    if (it != left_cache.end()) return it->second;
    TruncatedSeries l = series_mul(head, barred_charge_multi(alg, rvec, cap));
    return left_cache.emplace(rvec, std::move(l.element)).first->second;
  };

  HopfElement target =
      barred_variant ? divergent_projection(base.element) : base.element;

  if (!restricted_variant && !barred_variant) {
    TensorElement lhs = coproduct(alg, target);
    TensorElement rhs(reg);
    for (const auto& rvec : supports) {
      HopfElement right = restrict_grading(target, GradingKind::Residue, rvec);
      if (right.is_zero()) continue;
      rhs += tensor_truncated(reg, left_series(rvec), right, cap);
    }
    return compare_tensors(lhs, rhs);
  }

  // restricted (and barred) variants: check every realized total grading
  for (const auto& R : residue_supports(*reg, target)) {
    HopfElement slice = restrict_grading(target, GradingKind::Residue, R);
    if (slice.is_zero()) continue;
    TensorElement lhs = coproduct(alg, slice);
    TensorElement rhs(reg);
    for (const auto& rvec : supports) {
      HopfElement right = restrict_grading(target, GradingKind::Residue, rvec);
      if (right.is_zero()) continue;
      std::vector<long> want(R);
      for (std::size_t i = 0; i < want.size(); ++i) want[i] -= rvec[i];
      HopfElement left = restrict_grading(left_series(rvec), GradingKind::Residue, want);
      rhs += tensor_truncated(reg, left, right, cap);
    }
    IdentityReport r = compare_tensors(lhs, rhs);
    if (!r.holds) return r;
  }
  return {};
}

} // namespace hopfren

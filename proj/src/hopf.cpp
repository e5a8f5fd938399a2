#include "hopfren/hopf.hpp"

#include <algorithm>
#include <sstream>

namespace hopfren {

HopfElement HopfElement::unit(RegistryPtr r, Rational coef) {
  HopfElement e(std::move(r));
  e.add_term({}, coef);
  return e;
}

HopfElement HopfElement::generator(RegistryPtr r, GraphId id, Rational coef) {
  HopfElement e(std::move(r));
  e.add_term({id}, coef);
  return e;
}

HopfElement& HopfElement::add_term(const Monomial& m, const Rational& coef) {
  if (coef == 0) return *this;
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms.emplace(m, coef);
  } else {
    it->second += coef;
    if (it->second == 0) terms.erase(it);
  }
  return *this;
}

Rational HopfElement::counit() const {
  auto it = terms.find(Monomial{});
  return it == terms.end() ? Rational(0) : it->second;
}

HopfElement& HopfElement::operator+=(const HopfElement& o) {
  if (!reg) reg = o.reg;
  if (o.reg && reg != o.reg) fail(ErrorCode::Mismatch, "elements of different algebras");
  for (const auto& [m, c] : o.terms) add_term(m, c);
  return *this;
}

HopfElement& HopfElement::operator-=(const HopfElement& o) {
  if (!reg) reg = o.reg;
  if (o.reg && reg != o.reg) fail(ErrorCode::Mismatch, "elements of different algebras");
  for (const auto& [m, c] : o.terms) add_term(m, -c);
  return *this;
}

HopfElement& HopfElement::operator*=(const Rational& c) {
  if (c == 0) {
    terms.clear();
    return *this;
  }
  for (auto& [m, coef] : terms) coef *= c;
  return *this;
}

HopfElement operator*(const HopfElement& a, const HopfElement& b) {
  if (a.reg && b.reg && a.reg != b.reg)
    fail(ErrorCode::Mismatch, "elements of different algebras");
  HopfElement out(a.reg ? a.reg : b.reg);
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms)
      out.add_term(monomial_product(ma, mb), ca * cb);
  return out;
}

HopfElement product(const HopfElement& a, const HopfElement& b) { return a * b; }

namespace {

std::string rational_text(const Rational& r) { return r.str(); }

std::vector<std::string> monomial_names(const GraphRegistry& reg, const Monomial& m) {
  std::vector<std::string> names;
  for (GraphId id : m) names.push_back(reg.rec(id).name);
  return names;
}

std::string names_text(const std::vector<std::string>& names) {
  std::string out = "[";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ",";
    out += names[i];
  }
  return out + "]";
}

} // namespace

std::string HopfElement::to_text() const {
  if (terms.empty()) return "0\n";
  std::vector<std::pair<std::vector<std::string>, std::string>> lines;
  for (const auto& [m, c] : terms)
    lines.emplace_back(monomial_names(*reg, m), rational_text(c));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& [names, coef] : lines)
    out += coef + " * " + names_text(names) + "\n";
  return out;
}

TensorElement& TensorElement::add_term(const Monomial& l, const Monomial& r,
                                       const Rational& coef) {
  if (coef == 0) return *this;
  auto key = std::make_pair(l, r);
  auto it = terms.find(key);
  if (it == terms.end()) {
    terms.emplace(key, coef);
  } else {
    it->second += coef;
    if (it->second == 0) terms.erase(it);
  }
  return *this;
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
  if (!reg) reg = o.reg;
  for (const auto& [k, c] : o.terms) add_term(k.first, k.second, c);
  return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o) {
  if (!reg) reg = o.reg;
  for (const auto& [k, c] : o.terms) add_term(k.first, k.second, -c);
  return *this;
}

TensorElement& TensorElement::operator*=(const Rational& c) {
  if (c == 0) {
    terms.clear();
    return *this;
  }
  for (auto& [k, coef] : terms) coef *= c;
  return *this;
}

std::string TensorElement::to_text() const {
  if (terms.empty()) return "0\n";
  std::vector<std::tuple<std::vector<std::string>, std::vector<std::string>, std::string>>
      lines;
  for (const auto& [k, c] : terms)
    lines.emplace_back(monomial_names(*reg, k.first), monomial_names(*reg, k.second),
                       rational_text(c));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& [l, r, coef] : lines)
    out += coef + " * " + names_text(l) + " (x) " + names_text(r) + "\n";
  return out;
}

HopfAlgebra::HopfAlgebra(TheoryPtr theory, EnumOptions options)
    : registry_(std::make_shared<GraphRegistry>(std::move(theory))),
      options_(std::move(options)) {}

const std::vector<GraphId>& HopfAlgebra::generators(const Amplitude& amplitude,
                                                    int loops) {
  auto key = std::make_pair(amplitude, loops);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = slots_.find(key);
    if (it != slots_.end()) return it->second;
  }
  std::vector<FeynmanGraph> pinned =
      enumerate_1pi(registry_->theory_ptr(), amplitude, loops, options_);
  std::set<GraphId> classes;
  for (const auto& g : pinned) classes.insert(registry_->intern(g));
  std::vector<GraphId> ids(classes.begin(), classes.end());
  std::lock_guard<std::mutex> lock(mutex_);
  return slots_.emplace(key, std::move(ids)).first->second;
}

const std::vector<HopfAlgebra::CoproductTerm>& HopfAlgebra::generator_coproduct(
    GraphId id) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = coproducts_.find(id);
    if (it != coproducts_.end()) return it->second;
  }
  const FeynmanGraph& g = registry_->rec(id).graph;
  DivergentSubgraphs div = divergent_subgraphs(g);
  if (!div.obstructions.empty())
    fail(ErrorCode::IllFormedHopf,
         "divergent subgraph with residue '" +
             amplitude_to_string(registry_->theory(), div.obstructions.front()) +
             "' outside the residue set");
  std::map<std::pair<Monomial, Monomial>, long> collected;
  for (const auto& sel : div.selections) {
    Monomial left;
    for (const auto& comp : sel.components)
      left.push_back(registry_->intern(induced_subgraph(g, comp)));
    std::sort(left.begin(), left.end());
    FeynmanGraph cog = contract(g, sel);
    Monomial right;
    if (!cog.empty()) right.push_back(registry_->intern(cog));
    collected[{left, right}] += 1;
  }
  std::vector<CoproductTerm> terms;
  for (const auto& [key, mult] : collected)
    terms.push_back({key.first, key.second, mult});
  std::lock_guard<std::mutex> lock(mutex_);
  return coproducts_.emplace(id, std::move(terms)).first->second;
}

const HopfElement& HopfAlgebra::generator_antipode(GraphId id) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = antipodes_.find(id);
    if (it != antipodes_.end()) return it->second;
  }
  // S(G) = - sum over proper divergent subgraphs of S(gamma) * G/gamma
  const auto& terms = generator_coproduct(id);
  HopfElement s(registry_);
  for (const auto& t : terms) {
    if (t.right.empty() && t.left == Monomial{id}) continue; // the full selection
    // S on the left monomial, multiplicatively
    HopfElement sleft = HopfElement::unit(registry_);
    for (GraphId gid : t.left) sleft = sleft * generator_antipode(gid);
    HopfElement piece(registry_);
    piece.add_term(t.right, Rational(t.multiplicity));
    s -= sleft * piece;
  }
  std::lock_guard<std::mutex> lock(mutex_);
  return antipodes_.emplace(id, std::move(s)).first->second;
}

TensorElement coproduct(HopfAlgebra& alg, const HopfElement& x) {
  TensorElement out(alg.registry());
  for (const auto& [monomial, coef] : x.terms) {
    // expand the product of generator coproducts
    std::vector<std::pair<Monomial, Monomial>> acc{{Monomial{}, Monomial{}}};
    std::vector<Rational> acc_coef{coef};
    for (GraphId id : monomial) {
      const auto& terms = alg.generator_coproduct(id);
      std::vector<std::pair<Monomial, Monomial>> next;
      std::vector<Rational> next_coef;
      next.reserve(acc.size() * terms.size());
      for (std::size_t i = 0; i < acc.size(); ++i) {
        for (const auto& t : terms) {
          next.emplace_back(monomial_product(acc[i].first, t.left),
                            monomial_product(acc[i].second, t.right));
          next_coef.push_back(acc_coef[i] * Rational(t.multiplicity));
        }
      }
      acc = std::move(next);
      acc_coef = std::move(next_coef);
    }
    for (std::size_t i = 0; i < acc.size(); ++i)
      out.add_term(acc[i].first, acc[i].second, acc_coef[i]);
  }
  return out;
}

HopfElement antipode(HopfAlgebra& alg, const HopfElement& x) {
  HopfElement out(alg.registry());
  for (const auto& [monomial, coef] : x.terms) {
    HopfElement s = HopfElement::unit(alg.registry(), coef);
    for (GraphId id : monomial) s = s * alg.generator_antipode(id);
    out += s;
  }
  return out;
}

HopfElement divergent_projection(const HopfElement& x) {
  HopfElement out(x.reg);
  for (const auto& [m, c] : x.terms)
    if (x.reg->monomial_divergent(m)) out.add_term(m, c);
  return out;
}

HopfElement augmentation_projection(const HopfElement& x) {
  HopfElement out = x;
  out.terms.erase(Monomial{});
  return out;
}

GradingVector grading_vector_of(const GraphRegistry& reg, const Monomial& m,
                                GradingKind kind) {
  GradingVector v;
  v.kind = kind;
  switch (kind) {
    case GradingKind::Loop: v.coords = {reg.monomial_loop(m)}; break;
    case GradingKind::Residue: v.coords = reg.monomial_resgrd(m); break;
    case GradingKind::Coupling: v.coords = reg.monomial_cplgrd(m); break;
  }
  return v;
}

HopfElement restrict_grading(const HopfElement& x, GradingKind kind,
                             const std::vector<long>& value) {
  HopfElement out(x.reg);
  for (const auto& [m, c] : x.terms)
    if (grading_vector_of(*x.reg, m, kind).coords == value) out.add_term(m, c);
  return out;
}

HopfElement convolution(HopfAlgebra& alg, const MonomialMap& f, const MonomialMap& g,
                        const HopfElement& x) {
  TensorElement dx = coproduct(alg, x);
  HopfElement out(alg.registry());
  for (const auto& [key, coef] : dx.terms)
    out += (f(key.first) * g(key.second)) * coef;
  return out;
}

} // namespace hopfren

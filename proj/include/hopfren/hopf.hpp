#pragma once

#include <functional>
#include <set>

#include "hopfren/enumerate.hpp"
#include "hopfren/subgraphs.hpp"

namespace hopfren {

// Exact-rational linear combination of monomials of generator classes.
class HopfElement {
public:
  RegistryPtr reg;
  std::map<Monomial, Rational> terms;

  HopfElement() = default;
  explicit HopfElement(RegistryPtr r) : reg(std::move(r)) {}

  static HopfElement zero(RegistryPtr r) { return HopfElement(std::move(r)); }
  static HopfElement unit(RegistryPtr r, Rational coef = 1);
  static HopfElement generator(RegistryPtr r, GraphId id, Rational coef = 1);

  HopfElement& add_term(const Monomial& m, const Rational& coef);
  bool is_zero() const { return terms.empty(); }
  Rational counit() const; // coefficient of the empty monomial

  HopfElement& operator+=(const HopfElement& o);
  HopfElement& operator-=(const HopfElement& o);
  HopfElement& operator*=(const Rational& c);

  friend HopfElement operator+(HopfElement a, const HopfElement& b) { return a += b; }
  friend HopfElement operator-(HopfElement a, const HopfElement& b) { return a -= b; }
  friend HopfElement operator*(HopfElement a, const Rational& c) { return a *= c; }
  friend HopfElement operator*(const Rational& c, HopfElement a) { return a *= c; }
  friend HopfElement operator*(const HopfElement& a, const HopfElement& b);

  bool operator==(const HopfElement& o) const { return terms == o.terms; }

  std::string to_text() const;
};

// Linear combination of pairs of monomials; the coproduct target.
class TensorElement {
public:
  RegistryPtr reg;
  std::map<std::pair<Monomial, Monomial>, Rational> terms;

  TensorElement() = default;
  explicit TensorElement(RegistryPtr r) : reg(std::move(r)) {}

  TensorElement& add_term(const Monomial& l, const Monomial& r, const Rational& coef);
  bool is_zero() const { return terms.empty(); }

  TensorElement& operator+=(const TensorElement& o);
  TensorElement& operator-=(const TensorElement& o);
  TensorElement& operator*=(const Rational& c);
  friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
  friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }

  bool operator==(const TensorElement& o) const { return terms == o.terms; }

  std::string to_text() const;
};

// The ambient algebra: owns the generator registry, the per-slot enumeration
// cache and the coproduct/antipode memo tables.
class HopfAlgebra {
public:
  explicit HopfAlgebra(TheoryPtr theory, EnumOptions options = {});

  const TheorySpec& theory() const { return registry_->theory(); }
  const TheoryPtr& theory_ptr() const { return registry_->theory_ptr(); }
  const RegistryPtr& registry() const { return registry_; }
  EnumOptions& options() { return options_; }

  // Generator classes with the given residue and loop number (>= 1), grouped
  // from the pinned enumeration.
  const std::vector<GraphId>& generators(const Amplitude& amplitude, int loops);

  // Coproduct terms of a generator: (subgraph monomial, cograph monomial,
  // multiplicity). Raises IllFormedHopf when a divergent subgraph falls
  // outside the residue set.
  struct CoproductTerm {
    Monomial left;
    Monomial right;
    long multiplicity = 1;
  };
  const std::vector<CoproductTerm>& generator_coproduct(GraphId id);

  const HopfElement& generator_antipode(GraphId id);

private:
  RegistryPtr registry_;
  EnumOptions options_;
  std::map<std::pair<Amplitude, int>, std::vector<GraphId>> slots_;
  std::map<GraphId, std::vector<CoproductTerm>> coproducts_;
  std::map<GraphId, HopfElement> antipodes_;
  std::mutex mutex_;
};

HopfElement product(const HopfElement& a, const HopfElement& b);

TensorElement coproduct(HopfAlgebra& alg, const HopfElement& x);

HopfElement antipode(HopfAlgebra& alg, const HopfElement& x);

// Keeps a summand iff every connected component is superficially divergent.
HopfElement divergent_projection(const HopfElement& x);

// Removes the coefficient of the unit.
HopfElement augmentation_projection(const HopfElement& x);

HopfElement restrict_grading(const HopfElement& x, GradingKind kind,
                             const std::vector<long>& value);

// Convolution (f * g)(x) = m ∘ (f ⊗ g) ∘ Δ(x) with H-valued linear maps
// defined on monomials.
using MonomialMap = std::function<HopfElement(const Monomial&)>;
HopfElement convolution(HopfAlgebra& alg, const MonomialMap& f, const MonomialMap& g,
                        const HopfElement& x);

GradingVector grading_vector_of(const GraphRegistry& reg, const Monomial& m,
                                GradingKind kind);

} // namespace hopfren

#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>

#include "hopfren/canonical.hpp"
#include "hopfren/power_counting.hpp"

namespace hopfren {

// Dense id of an interned generator class. Generators are identified by the
// unpinned canonical form: the isomorphism notion under which the Hopf
// algebra is defined. Pinned enumeration classes that differ only by the
// port labeling intern to the same generator.
using GraphId = int;

// A product of generators: sorted vector of ids. Empty = the unit.
using Monomial = std::vector<GraphId>;

struct GraphRecord {
  FeynmanGraph graph; // representative, pinned-canonical labeling
  CanonicalForm unpinned_key;
  std::string name;
  long loop = 0;
  std::vector<long> resgrd;
  std::vector<long> cplgrd;
  long sdd_value = 0;
  bool divergent = false;
  std::int64_t sym = 1;
  // number of distinct external-leg labelings: pinned classes in this
  // unpinned class; Green's functions weight a class by labelings/sym
  std::int64_t labelings = 1;
  AmplitudeInfo info;
};

class GraphRegistry {
public:
  explicit GraphRegistry(TheoryPtr theory) : theory_(std::move(theory)) {}

  GraphId intern(const FeynmanGraph& g);
  const GraphRecord& rec(GraphId id) const;
  int size() const;

  const TheorySpec& theory() const { return *theory_; }
  const TheoryPtr& theory_ptr() const { return theory_; }

  long monomial_loop(const Monomial& m) const;
  std::vector<long> monomial_resgrd(const Monomial& m) const;
  std::vector<long> monomial_cplgrd(const Monomial& m) const;
  bool monomial_divergent(const Monomial& m) const; // every component divergent

  // Product symmetry factor: component factors times k! per k identical ones.
  Rational monomial_sym(const Monomial& m) const;

  // Product of component labeling counts.
  Rational monomial_labelings(const Monomial& m) const;

  std::string monomial_to_string(const Monomial& m) const;

private:
  TheoryPtr theory_;
  std::map<CanonicalForm, GraphId> ids_;
  std::deque<GraphRecord> records_; // stable references under growth
  mutable std::mutex mutex_;
};

using RegistryPtr = std::shared_ptr<GraphRegistry>;

inline Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

} // namespace hopfren

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "hopfren/series.hpp"

using namespace hopfren;
using hopfren::testing::fixture;

namespace {

Rational coef_of(const HopfElement& x, const Monomial& m) {
  auto it = x.terms.find(m);
  return it == x.terms.end() ? Rational(0) : it->second;
}

} // namespace

TEST_CASE("green functions at one loop") {
  auto t = fixture("phi3_d6");
  HopfAlgebra alg(t);
  GraphId b1 = alg.generators(Amplitude::of_edge(*t, 0), 1).at(0);
  GraphId t1 = alg.generators(Amplitude::of_vertex(*t, 0), 1).at(0);

  TruncatedSeries prop = green_function(alg, Amplitude::of_edge(*t, 0), 1);
  CHECK(prop.element.counit() == Rational(1));
  CHECK(coef_of(prop.element, {b1}) == Rational(-1, 2));
  CHECK(prop.element.terms.size() == 2);

  TruncatedSeries vert = green_function(alg, Amplitude::of_vertex(*t, 0), 1);
  CHECK(coef_of(vert.element, {t1}) == Rational(1));
  CHECK(vert.element.terms.size() == 2);

  TruncatedSeries zero_cap = green_function(alg, Amplitude::of_edge(*t, 0), 0);
  CHECK(zero_cap.element == HopfElement::unit(alg.registry()));
}

TEST_CASE("green coefficients are inverse symmetry factors") {
  auto t = fixture("toyym_1edge");
  HopfAlgebra alg(t);
  for (const auto& amp : {Amplitude::of_edge(*t, 0), Amplitude::of_vertex(*t, 0),
                          Amplitude::of_vertex(*t, 1)}) {
    TruncatedSeries s = green_function(alg, amp, 2);
    bool edge = alg.theory().classify_amplitude(amp).kind == Amplitude::Kind::Edge;
    for (int l = 1; l <= 2; ++l)
      for (GraphId id : alg.generators(amp, l)) {
        const auto& rec = alg.registry()->rec(id);
        Rational expect =
            Rational(edge ? -1 : 1) * Rational(rec.labelings) / Rational(rec.sym);
        CHECK(coef_of(s.element, {id}) == expect);
      }
  }
}

TEST_CASE("restriction of a green function matches direct enumeration") {
  auto t = fixture("phi3_d6");
  HopfAlgebra alg(t);
  TruncatedSeries s = green_function(alg, Amplitude::of_vertex(*t, 0), 2);
  for (long l = 1; l <= 2; ++l) {
    HopfElement slice = restrict_grading(s.element, GradingKind::Loop, {l});
    HopfElement direct(alg.registry());
    for (GraphId id : alg.generators(Amplitude::of_vertex(*t, 0), int(l))) {
      const auto& rec = alg.registry()->rec(id);
      direct.add_term({id}, Rational(rec.labelings) / Rational(rec.sym));
    }
    CHECK(slice == direct);
  }
  CHECK(restrict_grading(s.element, GradingKind::Loop, {0}) ==
        HopfElement::unit(alg.registry()));
}

TEST_CASE("the phi3 charge at one loop") {
  auto t = fixture("phi3_d6");
  HopfAlgebra alg(t);
  GraphId b1 = alg.generators(Amplitude::of_edge(*t, 0), 1).at(0);
  GraphId t1 = alg.generators(Amplitude::of_vertex(*t, 0), 1).at(0);

  TruncatedSeries q = charge(alg, 0, 1);
  CHECK(q.element.counit() == Rational(1));
  CHECK(coef_of(q.element, {t1}) == Rational(1));
  CHECK(coef_of(q.element, {b1}) == Rational(3, 4));
  CHECK(q.element.terms.size() == 3);

  CHECK(charge(alg, 0, 0).element == HopfElement::unit(alg.registry()));
}

TEST_CASE("toyym v4 charge picks up propagator corrections with unit weight") {
  auto t = fixture("toyym_1edge");
  HopfAlgebra alg(t);
  TruncatedSeries q = charge(alg, t->vertex_index("v4"), 1);
  for (GraphId id : alg.generators(Amplitude::of_edge(*t, 0), 1)) {
    // (X^a)^{-4/2} contributes 2/Sym per one-loop propagator class
    CHECK(coef_of(q.element, {id}) == Rational(2) / Rational(alg.registry()->rec(id).sym));
  }
  for (GraphId id : alg.generators(Amplitude::of_vertex(*t, 1), 1)) {
    const auto& rec = alg.registry()->rec(id);
    CHECK(coef_of(q.element, {id}) == Rational(rec.labelings) / Rational(rec.sym));
  }
}

TEST_CASE("charge powers") {
  auto t = fixture("phi3_d6");
  HopfAlgebra alg(t);
  GraphId b1 = alg.generators(Amplitude::of_edge(*t, 0), 1).at(0);
  GraphId t1 = alg.generators(Amplitude::of_vertex(*t, 0), 1).at(0);

  // zero multi-index gives the unit
  CHECK(charge_power(alg, std::vector<long>{0}, 2).element ==
        HopfElement::unit(alg.registry()));

  TruncatedSeries sq = charge_power(alg, std::vector<long>{2}, 1);
  CHECK(coef_of(sq.element, {t1}) == Rational(2));
  CHECK(coef_of(sq.element, {b1}) == Rational(3, 2));

  // binomial consistency: sqrt * sqrt = charge at cap 2
  TruncatedSeries half = charge_power(alg, 0, Rational(1, 2), 2);
  TruncatedSeries whole = series_mul(half, half);
  CHECK(whole.element == charge(alg, 0, 2).element);

  // negative powers invert exactly
  TruncatedSeries inv = charge_power(alg, 0, Rational(-1), 2);
  CHECK(series_mul(inv, charge(alg, 0, 2)).element ==
        HopfElement::unit(alg.registry()));
}

TEST_CASE("powers require a unit head coefficient") {
  auto t = fixture("phi3_d6");
  HopfAlgebra alg(t);
  TruncatedSeries bad;
  bad.cap = 1;
  bad.element = HopfElement::unit(alg.registry(), Rational(2));
  CHECK_THROWS_AS(series_pow(bad, Rational(1, 2)), Error);
}

TEST_CASE("insertion identity") {
  auto t = fixture("phi3_d6");
  HopfAlgebra alg(t);
  GraphId b1 = alg.generators(Amplitude::of_edge(*t, 0), 1).at(0);
  GraphId t1 = alg.generators(Amplitude::of_vertex(*t, 0), 1).at(0);
  const auto& b1g = alg.registry()->rec(b1).graph;
  const auto& t1g = alg.registry()->rec(t1).graph;

  CHECK(verify_insertion_identity(alg, b1g, 0).holds); // both sides the unit
  CHECK(verify_insertion_identity(alg, b1g, 1).holds);
  CHECK(verify_insertion_identity(alg, t1g, 1).holds);
  CHECK(verify_insertion_identity(alg, b1g, 2).holds);
  CHECK(verify_insertion_identity(alg, t1g, 2).holds);
}

TEST_CASE("insertable set identity") {
  auto t = fixture("phi3_d6");
  HopfAlgebra alg(t);
  Amplitude prop = Amplitude::of_edge(*t, 0);
  Amplitude vert = Amplitude::of_vertex(*t, 0);

  CHECK(verify_insertable_set_identity(alg, prop, {2}, 1).holds);
  CHECK(verify_insertable_set_identity(alg, prop, {2}, 2).holds);
  CHECK(verify_insertable_set_identity(alg, vert, {2}, 1).holds);
  CHECK(verify_insertable_set_identity(alg, vert, {2}, 2).holds);
  CHECK(verify_insertable_set_identity(alg, prop, {4}, 2).holds);
  // half-integer loop content: no graphs, vacuous
  CHECK(verify_insertable_set_identity(alg, vert, {3}, 1).holds);
}

TEST_CASE("coproduct identities for phi3 at caps 1 and 2") {
  auto t = fixture("phi3_d6");
  HopfAlgebra alg(t);
  Amplitude prop = Amplitude::of_edge(*t, 0);
  Amplitude vert = Amplitude::of_vertex(*t, 0);

  for (int cap = 1; cap <= 2; ++cap) {
    for (const auto& amp : {prop, vert}) {
      CHECK(verify_coproduct_identity(alg, CoproductIdentityKind::Green, amp, 1, cap,
                                      false, false).holds);
      CHECK(verify_coproduct_identity(alg, CoproductIdentityKind::Green, amp, 1, cap,
                                      false, true).holds);
      CHECK(verify_coproduct_identity(alg, CoproductIdentityKind::Green, amp, 1, cap,
                                      true, true).holds);
    }
    CHECK(verify_coproduct_identity(alg, CoproductIdentityKind::Charge, vert, 1, cap,
                                    false, false).holds);
    CHECK(verify_coproduct_identity(alg, CoproductIdentityKind::Charge, vert, 1, cap,
                                    true, true).holds);
    for (const Rational& m : {Rational(2), Rational(-1), Rational(1, 2)}) {
      CHECK(verify_coproduct_identity(alg, CoproductIdentityKind::ChargePower, vert, m,
                                      cap, false, false).holds);
      CHECK(verify_coproduct_identity(alg, CoproductIdentityKind::ChargePower, vert, m,
                                      cap, true, true).holds);
    }
  }
}

TEST_CASE("cap zero coproduct identity is trivial") {
  auto t = fixture("phi3_d6");
  HopfAlgebra alg(t);
  CHECK(verify_coproduct_identity(alg, CoproductIdentityKind::Green,
                                  Amplitude::of_edge(*t, 0), 1, 0, false, false)
            .holds);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "hopfren/theory.hpp"

using namespace hopfren;
using hopfren::testing::fixture;

TEST_CASE("minimal phi3 spec loads and validates") {
  auto t = fixture("phi3_d6");
  CHECK(t->dimension == 6);
  CHECK(t->num_edge_residues() == 1);
  CHECK(t->num_vertex_residues() == 1);
  CHECK(t->vertices[0].valence() == 3);
  CHECK(t->couplings == std::vector<std::string>{"g"});
}

TEST_CASE("semantic and parse errors carry field paths") {
  CHECK_THROWS_WITH_AS(load_theory("{"), doctest::Contains("invalid JSON"), Error);

  // vertex leg naming an undeclared edge
  std::string bad = R"({"dimension":4,"edges":[{"name":"s","weight":-2,"oriented":false}],
    "vertices":[{"name":"v","weight":0,"legs":["t","t","t"],"coupling":{"g":1}}],
    "couplings":["g"],"qgs":[]})";
  try {
    load_theory(bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SemanticError);
    CHECK(std::string(e.what()).find("$.vertices[0].legs") != std::string::npos);
  }

  // unknown fields rejected
  std::string unknown = R"({"dimension":4,"edges":[],"vertices":[],"couplings":[],
    "qgs":[],"extra":1})";
  CHECK_THROWS_AS(load_theory(unknown), Error);

  // trivial coupling monomial rejected
  std::string trivial = R"({"dimension":4,"edges":[{"name":"s","weight":-2,"oriented":false}],
    "vertices":[{"name":"v","weight":0,"legs":["s","s","s"],"coupling":{}}],
    "couplings":[],"qgs":[]})";
  CHECK_THROWS_AS(load_theory(trivial), Error);
}

TEST_CASE("toy gravity spec round-trips with stable coordinates") {
  auto t = fixture("toygrav");
  CHECK(t->num_vertex_residues() == 3);
  auto reloaded = load_theory(t->to_json());
  CHECK(reloaded.to_json() == t->to_json());
  for (int v = 0; v < 3; ++v) {
    CHECK(reloaded.vertices[v].name == t->vertices[v].name);
    CHECK(reloaded.vertices[v].coupling_exponents == t->vertices[v].coupling_exponents);
  }
  CHECK(reloaded.content_hash() == t->content_hash());
}

TEST_CASE("corolla weights") {
  auto phi3 = fixture("phi3_d6");
  CHECK(corolla_weight(*phi3, "v3") == Rational(-3));

  auto grav = fixture("toygrav");
  CHECK(corolla_weight(*grav, "h4") == Rational(-2)); // 2 - val(v)
  CHECK(corolla_weight(*grav, "h3") == Rational(-1));
  CHECK(corolla_weight(*grav, "h5") == Rational(-3));

  // all-zero weights give zero
  auto zero = std::make_shared<TheorySpec>(load_theory(
      R"({"dimension":4,"edges":[{"name":"s","weight":0,"oriented":false}],
          "vertices":[{"name":"v","weight":0,"legs":["s","s","s"],"coupling":{"g":1}}],
          "couplings":["g"],"qgs":[]})"));
  CHECK(corolla_weight(*zero, "v") == Rational(0));

  CHECK_THROWS_AS(corolla_weight(*phi3, "nope"), Error);
}

TEST_CASE("corolla classification") {
  auto phi36 = fixture("phi3_d6");
  CHECK(classify_corolla(*phi36, "v3") == CorollaClass::Renormalizable);

  auto phi34 = fixture("phi3_d4");
  CHECK(classify_corolla(*phi34, "v3") == CorollaClass::SuperRenormalizable);

  auto grav = fixture("toygrav");
  CHECK(classify_corolla(*grav, "h3") == CorollaClass::NonRenormalizable);
  CHECK(classify_corolla(*grav, "h4") == CorollaClass::NonRenormalizable);

  auto phi44 = fixture("phi4_d4");
  CHECK(classify_corolla(*phi44, "v4") == CorollaClass::Renormalizable);

  auto ym = fixture("toyym_1edge");
  CHECK(classify_corolla(*ym, "v3") == CorollaClass::Renormalizable);
  CHECK(classify_corolla(*ym, "v4") == CorollaClass::Renormalizable);
}

TEST_CASE("grading compatibility") {
  auto ym = fixture("toyym_1edge");
  auto report = grading_compatibility(*ym);
  CHECK(report.coupling_grading_compatible); // 2*(-2) == 1*(-4)
  CHECK(report.loop_grading_compatible);     // -2/1 == -4/2

  auto grav = fixture("toygrav");
  auto grav_report = grading_compatibility(*grav);
  CHECK(grav_report.coupling_grading_compatible);
  CHECK(grav_report.loop_grading_compatible); // (2-n)/(n-2) == -1 for all n

  auto phi3 = fixture("phi3_d6");
  auto single = grading_compatibility(*phi3);
  CHECK(single.coupling_grading_compatible);
  CHECK(single.loop_grading_compatible);

  // incompatible: same coupling, mismatched corolla weights
  auto bad = std::make_shared<TheorySpec>(load_theory(
      R"({"dimension":4,"edges":[{"name":"s","weight":-2,"oriented":false}],
          "vertices":[{"name":"a","weight":0,"legs":["s","s","s"],"coupling":{"g":1}},
                      {"name":"b","weight":1,"legs":["s","s","s"],"coupling":{"g":1}}],
          "couplings":["g"],"qgs":[]})"));
  auto bad_report = grading_compatibility(*bad);
  CHECK_FALSE(bad_report.coupling_grading_compatible);
  CHECK(bad_report.coupling_witnesses.size() == 1);
  CHECK_FALSE(bad_report.loop_grading_compatible);
}

TEST_CASE("two-valent residues are flagged for review") {
  auto t = std::make_shared<TheorySpec>(load_theory(
      R"({"dimension":4,"edges":[{"name":"s","weight":-2,"oriented":false}],
          "vertices":[{"name":"v","weight":0,"legs":["s","s","s"],"coupling":{"g":1}},
                      {"name":"m2","weight":0,"legs":["s","s"],"coupling":{"g":1}}],
          "couplings":["g"],"qgs":[]})"));
  auto report = grading_compatibility(*t);
  CHECK(report.two_valent_review == std::vector<int>{1});
}

TEST_CASE("cograph-divergence criterion") {
  auto grav = fixture("toygrav");
  auto grav_crit = cograph_divergence_criterion(*grav);
  CHECK(grav_crit.criterion_applies);
  CHECK(grav_crit.certified);

  auto ym = fixture("toyym_1edge");
  auto ym_crit = cograph_divergence_criterion(*ym);
  CHECK(ym_crit.criterion_applies);
  CHECK(ym_crit.certified);

  auto phi34 = fixture("phi3_d4");
  auto phi34_crit = cograph_divergence_criterion(*phi34);
  CHECK_FALSE(phi34_crit.criterion_applies);
  CHECK_FALSE(phi34_crit.certified);

  auto phi44 = fixture("phi4_d4");
  auto phi44_crit = cograph_divergence_criterion(*phi44);
  CHECK(phi44_crit.criterion_applies);
  CHECK(phi44_crit.certified);
}

TEST_CASE("qgs relations validated at load") {
  auto ym = fixture("toyym_1edge");
  CHECK(ym->qgs_relations.size() == 1);
  CHECK(ym->qgs_relations[0].m == 2);

  std::string bad = R"({"dimension":4,"edges":[{"name":"a","weight":-2,"oriented":false}],
    "vertices":[{"name":"v3","weight":1,"legs":["a","a","a"],"coupling":{"g":1}},
                {"name":"v4","weight":0,"legs":["a","a","a","a"],"coupling":{"g":2}}],
    "couplings":["g"],"qgs":[{"v":"v3","m":1,"w":"v4","n":1}]})";
  CHECK_THROWS_AS(load_theory(bad), Error); // theta powers do not match

  std::string trivial = R"({"dimension":4,"edges":[{"name":"a","weight":-2,"oriented":false}],
    "vertices":[{"name":"v3","weight":1,"legs":["a","a","a"],"coupling":{"g":1}}],
    "couplings":["g"],"qgs":[{"v":"v3","m":2,"w":"v3","n":2}]})";
  CHECK_THROWS_AS(load_theory(trivial), Error);
}

TEST_CASE("amplitude classification") {
  auto ym = fixture("toyym_1edge");
  Amplitude prop = Amplitude::of_edge(*ym, 0);
  CHECK(ym->classify_amplitude(prop).kind == Amplitude::Kind::Edge);
  Amplitude v4 = Amplitude::of_vertex(*ym, ym->vertex_index("v4"));
  CHECK(ym->classify_amplitude(v4).kind == Amplitude::Kind::Vertex);
  Amplitude five;
  for (int i = 0; i < 5; ++i) five.legs.emplace_back(0, 0);
  CHECK(ym->classify_amplitude(five).kind == Amplitude::Kind::PureQuantum);
}

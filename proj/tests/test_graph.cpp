#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "hopfren/canonical.hpp"
#include "hopfren/power_counting.hpp"
#include "oracles.hpp"

using namespace hopfren;
using hopfren::testing::fixture;
using oracle::build_graph;

namespace {

// one-loop propagator bubble: two v3 vertices, two parallel edges
FeynmanGraph make_b1(TheoryPtr t) {
  return build_graph(t, {"v3", "v3"}, {{0, 1, "s"}, {0, 1, "s"}}, {{0, "s"}, {1, "s"}});
}

// one-loop triangle with three external legs
FeynmanGraph make_t1(TheoryPtr t) {
  return build_graph(t, {"v3", "v3", "v3"}, {{0, 1, "s"}, {1, 2, "s"}, {0, 2, "s"}},
                     {{0, "s"}, {1, "s"}, {2, "s"}});
}

// B1 nested inside one internal edge of B1
FeynmanGraph make_n2(TheoryPtr t) {
  return build_graph(
      t, {"v3", "v3", "v3", "v3"},
      {{0, 2, "s"}, {2, 3, "s"}, {2, 3, "s"}, {3, 1, "s"}, {0, 1, "s"}},
      {{0, "s"}, {1, "s"}});
}

} // namespace

TEST_CASE("residue of hand-built graphs") {
  auto t = fixture("phi3_d6");
  auto b1 = make_b1(t);
  CHECK(t->classify_amplitude(residue_of(b1)).kind == Amplitude::Kind::Edge);

  auto t1 = make_t1(t);
  auto info = t->classify_amplitude(residue_of(t1));
  CHECK(info.kind == Amplitude::Kind::Vertex);
  CHECK(t->vertices[info.residue_index].name == "v3");

  // corolla: residue of a single vertex with external legs is itself
  auto corolla = build_graph(t, {"v3"}, {}, {{0, "s"}, {0, "s"}, {0, "s"}});
  CHECK(t->classify_amplitude(residue_of(corolla)).kind == Amplitude::Kind::Vertex);
}

TEST_CASE("loop numbers") {
  auto t = fixture("phi3_d6");
  CHECK(loop_number(make_b1(t)) == 1);
  CHECK(loop_number(make_n2(t)) == 2);
  // a tree has no loops
  auto tree = build_graph(t, {"v3", "v3"}, {{0, 1, "s"}},
                          {{0, "s"}, {0, "s"}, {1, "s"}, {1, "s"}});
  CHECK(loop_number(tree) == 0);
}

TEST_CASE("one-particle irreducibility") {
  auto t = fixture("phi3_d6");
  CHECK(is_one_pi(make_b1(t)));
  CHECK_FALSE(is_one_pi(build_graph(t, {"v3", "v3"}, {{0, 1, "s"}},
                                    {{0, "s"}, {0, "s"}, {1, "s"}, {1, "s"}})));
  // two bubbles joined by a single edge
  auto two_bubbles = build_graph(
      t, {"v3", "v3", "v3", "v3"},
      {{0, 1, "s"}, {0, 1, "s"}, {1, 2, "s"}, {2, 3, "s"}, {2, 3, "s"}},
      {{0, "s"}, {3, "s"}});
  CHECK_FALSE(is_one_pi(two_bubbles));
  // single corolla is vacuously bridge-free
  CHECK(is_one_pi(build_graph(t, {"v3"}, {}, {{0, "s"}, {0, "s"}, {0, "s"}})));
}

TEST_CASE("gradings") {
  auto t = fixture("phi3_d6");
  auto b1 = make_b1(t);
  Gradings g = gradings_of(b1);
  CHECK(g.loop == 1);
  CHECK(g.residue == std::vector<long>{2}); // edge residue: no extres unit
  CHECK(g.coupling == std::vector<long>{2});

  Gradings gt = gradings_of(make_t1(t));
  CHECK(gt.residue == std::vector<long>{2}); // 3 - 1

  Gradings ge = gradings_of(empty_graph(t));
  CHECK(ge.loop == 0);
  CHECK(ge.residue == std::vector<long>{0});
  CHECK(ge.coupling == std::vector<long>{0});
}

TEST_CASE("canonical forms identify exactly the isomorphic graphs") {
  auto t = fixture("phi3_d6");
  auto b1 = make_b1(t);

  // a relabeled bubble
  auto b1_relabel = build_graph(t, {"v3", "v3"}, {{1, 0, "s"}, {1, 0, "s"}},
                                {{1, "s"}, {0, "s"}});
  CHECK(canonicalize(b1) == canonicalize(b1_relabel));
  CHECK(oracle::isomorphic_pinned(b1, b1_relabel));

  CHECK(canonicalize(b1) != canonicalize(make_t1(t)));

  // nested vs planar-rung 2-loop propagator graphs are distinct
  auto n2 = make_n2(t);
  auto theta = build_graph(
      t, {"v3", "v3", "v3", "v3"},
      {{0, 2, "s"}, {0, 3, "s"}, {2, 3, "s"}, {2, 1, "s"}, {3, 1, "s"}},
      {{0, "s"}, {1, "s"}});
  CHECK(canonicalize(n2) != canonicalize(theta));
  CHECK_FALSE(oracle::isomorphic_pinned(n2, theta));
}

TEST_CASE("canonical forms agree with the brute-force oracle on enumerated sets") {
  auto t = fixture("phi3_d6");
  // all 2-loop propagator graphs, brute force
  auto graphs = oracle::enumerate_by_pairings(t, Amplitude::of_edge(*t, 0), 2);
  for (std::size_t i = 0; i < graphs.size(); ++i)
    for (std::size_t j = 0; j < graphs.size(); ++j) {
      bool iso = oracle::isomorphic_pinned(graphs[i], graphs[j]);
      bool same_key = canonicalize(graphs[i]) == canonicalize(graphs[j]);
      CHECK(iso == same_key);
    }
}

TEST_CASE("symmetry factors") {
  auto t = fixture("phi3_d6");
  CHECK(symmetry_factor(make_b1(t)) == 2);
  CHECK(symmetry_factor(make_t1(t)) == 1);
  CHECK(symmetry_factor(make_n2(t)) == 2);
  CHECK(symmetry_factor(empty_graph(t)) == 1);

  auto phi4 = fixture("phi4_d4");
  // sunset: two v4 vertices, three parallel edges, one leg each
  auto sunset = build_graph(phi4, {"v4", "v4"},
                            {{0, 1, "s"}, {0, 1, "s"}, {0, 1, "s"}},
                            {{0, "s"}, {1, "s"}});
  CHECK(symmetry_factor(sunset) == 6);
  // tadpole: self-loop plus two legs
  auto tadpole = build_graph(phi4, {"v4"}, {{0, 0, "s"}}, {{0, "s"}, {0, "s"}});
  CHECK(symmetry_factor(tadpole) == 1);
}

TEST_CASE("symmetry factors match the brute-force automorphism count") {
  auto t = fixture("phi3_d6");
  for (const auto& g : oracle::enumerate_by_pairings(t, Amplitude::of_edge(*t, 0), 2))
    CHECK(symmetry_factor(g) == oracle::automorphism_order(g));
  for (const auto& g : oracle::enumerate_by_pairings(t, Amplitude::of_vertex(*t, 0), 1))
    CHECK(symmetry_factor(g) == oracle::automorphism_order(g));
  auto phi4 = fixture("phi4_d4");
  for (const auto& g :
       oracle::enumerate_by_pairings(phi4, Amplitude::of_edge(*phi4, 0), 2))
    CHECK(symmetry_factor(g) == oracle::automorphism_order(g));
}

TEST_CASE("sdd three ways") {
  auto t6 = fixture("phi3_d6");
  auto b1 = make_b1(t6);
  auto rep = sdd_report(b1);
  CHECK(rep.by_definition == 2);
  CHECK(rep.by_corollas == Rational(2));
  CHECK(rep.by_residue_grading == Rational(2));

  auto t1 = make_t1(t6);
  rep = sdd_report(t1);
  CHECK(rep.by_definition == 0);
  CHECK(rep.by_corollas == Rational(0));
  CHECK(rep.by_residue_grading == Rational(0));

  auto phi4 = fixture("phi4_d4");
  auto oneloop4pt = build_graph(phi4, {"v4", "v4"}, {{0, 1, "s"}, {0, 1, "s"}},
                                {{0, "s"}, {0, "s"}, {1, "s"}, {1, "s"}});
  rep = sdd_report(oneloop4pt);
  CHECK(rep.by_definition == 0);
  CHECK(rep.by_corollas == Rational(0));
  CHECK(rep.by_residue_grading == Rational(0));
}

TEST_CASE("ssdd split sign pattern") {
  auto t6 = fixture("phi3_d6");
  auto split6 = ssdd_split(make_b1(t6));
  CHECK(split6.non_renormalizable == Rational(0));
  CHECK(split6.renormalizable == Rational(0));
  CHECK(split6.super_renormalizable == Rational(0));

  auto t4 = fixture("phi3_d4");
  auto split4 = ssdd_split(make_b1(t4));
  CHECK(split4.super_renormalizable == Rational(-2));
  CHECK(split4.non_renormalizable == Rational(0));

  auto grav = fixture("toygrav");
  auto h3bubble = build_graph(grav, {"h3", "h3"}, {{0, 1, "h"}, {0, 1, "h"}},
                              {{0, "h"}, {1, "h"}});
  auto splitg = ssdd_split(h3bubble);
  CHECK(splitg.non_renormalizable == Rational(2));
  CHECK(splitg.renormalizable == Rational(0));
  CHECK(splitg.super_renormalizable == Rational(0));
}

TEST_CASE("graph validation catches bad slot fills") {
  auto t = fixture("phi3_d6");
  FeynmanGraph g;
  g.theory = t;
  g.vertex_residues = {0};
  g.legs.push_back({0, 0, 0, 0});
  CHECK_THROWS_AS(g.validate(), Error); // only one of three slots filled
}

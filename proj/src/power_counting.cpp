#include "hopfren/power_counting.hpp"

namespace hopfren {

long sdd(const FeynmanGraph& g) {
  if (g.empty()) return 0;
  const TheorySpec& t = *g.theory;
  long w = long(t.dimension) * loop_number(g);
  for (int r : g.vertex_residues) w += t.vertices[r].weight;
  for (const auto& e : g.edges) w += t.edges[e.residue].weight;
  return w;
}

bool is_divergent(const FeynmanGraph& g) { return sdd(g) >= 0; }

Rational rho_of_amplitude(const TheorySpec& theory, const Amplitude& amplitude) {
  AmplitudeInfo info = theory.classify_amplitude(amplitude);
  if (info.kind == Amplitude::Kind::Vertex)
    return Rational(theory.vertices[info.residue_index].weight);
  // For non-vertex residues: d*(1 - X/2) - 1/2 * sum of external leg weights.
  Rational rho = Rational(theory.dimension) *
                 (Rational(1) - Rational(amplitude.size(), 2));
  for (const auto& [e, dir] : amplitude.legs)
    rho -= Rational(theory.edges[e].weight, 2);
  return rho;
}

namespace {

Rational sigma_coefficient(const TheorySpec& theory, int vertex_residue) {
  const VertexResidue& v = theory.vertices[vertex_residue];
  return Rational(theory.dimension) * (Rational(v.valence(), 2) - 1) +
         corolla_weight(theory, vertex_residue);
}

} // namespace

Rational sigma_of_grading(const TheorySpec& theory, const std::vector<long>& resgrd) {
  Rational s = 0;
  for (int i = 0; i < theory.num_vertex_residues(); ++i)
    s += sigma_coefficient(theory, i) * Rational(resgrd[i]);
  return s;
}

SddReport sdd_report(const FeynmanGraph& g) {
  if (g.empty() || !g.is_connected())
    fail(ErrorCode::SemanticError,
         "the corolla and residue-grading routes need a non-empty connected graph");
  const TheorySpec& t = *g.theory;
  SddReport report;
  report.by_definition = sdd(g);

  Rational w = Rational(t.dimension) * loop_number(g);
  for (int r : g.vertex_residues) w += corolla_weight(t, r);
  Amplitude res = residue_of(g);
  for (const auto& [e, dir] : res.legs) w -= Rational(t.edges[e].weight, 2);
  report.by_corollas = w;

  Gradings grd = gradings_of(g);
  report.by_residue_grading = rho_of_amplitude(t, res) + sigma_of_grading(t, grd.residue);
  return report;
}

SigmaSplit ssdd_split(const FeynmanGraph& g) {
  if (g.empty() || !g.is_connected())
    fail(ErrorCode::SemanticError, "ssdd split needs a non-empty connected graph");
  const TheorySpec& t = *g.theory;
  Gradings grd = gradings_of(g);
  SigmaSplit split;
  for (int i = 0; i < t.num_vertex_residues(); ++i) {
    Rational part = sigma_coefficient(t, i) * Rational(grd.residue[i]);
    switch (classify_corolla(t, i)) {
      case CorollaClass::NonRenormalizable: split.non_renormalizable += part; break;
      case CorollaClass::Renormalizable: split.renormalizable += part; break;
      case CorollaClass::SuperRenormalizable: split.super_renormalizable += part; break;
    }
  }
  return split;
}

} // namespace hopfren

#pragma once

#include "hopfren/graph.hpp"

namespace hopfren {

// Superficial degree of divergence, computed three independent ways. All
// three agree on non-empty connected graphs; the Euler-characteristic routes
// require connectedness.
struct SddReport {
  long by_definition = 0;       // d*loops + sum of vertex and internal edge weights
  Rational by_corollas = 0;     // d*b1 + sum of corolla weights - half the external weight
  Rational by_residue_grading = 0; // rho(res) + sigma(resgrd)
};

long sdd(const FeynmanGraph& g);
SddReport sdd_report(const FeynmanGraph& g);

bool is_divergent(const FeynmanGraph& g); // sdd >= 0; the empty graph counts as divergent

// The residue part rho of the affine decomposition sdd = rho(res) + sigma(resgrd).
Rational rho_of_amplitude(const TheorySpec& theory, const Amplitude& amplitude);

// The linear part sigma evaluated on a residue multi-index.
Rational sigma_of_grading(const TheorySpec& theory, const std::vector<long>& resgrd);

// sigma split by corolla class: (non-renormalizable, renormalizable,
// super-renormalizable) contributions. sigma_ren is identically zero; the
// split satisfies sigma_non >= 0 and sigma_super <= 0 on actual graphs.
struct SigmaSplit {
  Rational non_renormalizable = 0;
  Rational renormalizable = 0;
  Rational super_renormalizable = 0;
};

SigmaSplit ssdd_split(const FeynmanGraph& g);

} // namespace hopfren

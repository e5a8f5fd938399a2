#pragma once

#include "hopfren/hopf.hpp"

namespace hopfren {

// A Hopf element that is exact on every grading with loop order <= cap.
struct TruncatedSeries {
  int cap = 0;
  HopfElement element;
};

TruncatedSeries truncate(HopfElement x, int cap);
TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);

// Formal binomial power: requires unit coefficient exactly 1.
TruncatedSeries series_pow(const TruncatedSeries& base, const Rational& exponent);

// Total combinatorial Green's function for an amplitude, truncated:
// 1 + sum for vertex residues, 1 - sum for edge residues, bare sum otherwise.
TruncatedSeries green_function(HopfAlgebra& alg, const Amplitude& amplitude, int cap);

// Divergent projection applied to a series.
TruncatedSeries barred(const TruncatedSeries& s);

// Combinatorial charge Q^v = X^v / prod_{e in legs(v)} sqrt(X^e).
TruncatedSeries charge(HopfAlgebra& alg, int vertex_residue, int cap);

// Products of charges over a residue multi-index, and rational powers of a
// single charge.
TruncatedSeries charge_power(HopfAlgebra& alg, const std::vector<long>& multi, int cap);
TruncatedSeries charge_power(HopfAlgebra& alg, int vertex_residue,
                             const Rational& exponent, int cap);

struct IdentityReport {
  bool holds = true;
  std::string mismatch; // first differing term, in the text serialization
};

// Direct insertion enumeration against the Green's-function product formula:
// sum over insertable gamma of ins(gamma|g)/Sym(gamma) * gamma equals
// prod_v Xbar^v / prod_e Xbar^e, truncated at cap.
IdentityReport verify_insertion_identity(HopfAlgebra& alg, const FeynmanGraph& g,
                                         int cap);

// The residue/residue-grading variant with insrr against Xbar^r Qbar^rvec
// (or the sqrt prefactor for pure quantum corrections).
IdentityReport verify_insertable_set_identity(HopfAlgebra& alg,
                                              const Amplitude& amplitude,
                                              const std::vector<long>& resgrd, int cap);

enum class CoproductIdentityKind { Green, Charge, ChargePower };

// The three coproduct identities, in the unrestricted, grading-restricted and
// divergent-projected (barred) variants, all compared slice by slice with
// left loop + right loop <= cap.
IdentityReport verify_coproduct_identity(HopfAlgebra& alg, CoproductIdentityKind kind,
                                         const Amplitude& amplitude,
                                         const Rational& power, int cap,
                                         bool barred_variant, bool restricted_variant);

} // namespace hopfren

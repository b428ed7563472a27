#pragma once

#include "qdistill/qstate.hpp"
#include "qdistill/types.hpp"

namespace qdistill {

// Partial-transpose separability verdict.  A two-qubit state is inseparable
// exactly when the minimum eigenvalue of rho^T2 drops below -1e-10; the
// witness is the corresponding eigenvector.
struct PptVerdict {
  bool inseparable;
  double min_eigenvalue;
  Vec4 witness;
};
PptVerdict ppt_test(const DensityMatrix& rho);

// Schmidt form of a pure 4-vector: product unitaries u1, u2 with
// (u1 ⊗ u2) psi = a e1⊗e1 + b e2⊗e2, a >= b >= 0, a^2 + b^2 = 1.
struct SchmidtForm {
  double a;
  double b;
  Mat2 u1;
  Mat2 u2;
};
SchmidtForm schmidt_form(const Vec4& psi);

enum class Party { A, B };

// Diagonal local filter, rescaled to spectral norm 1 so the pass probability
// is maximal; `side` names the party whose particles face the filter.
struct Filter {
  Mat2 w;
  Party side;
};

// Filter derivation from the negative partial-transpose eigenvector.  The
// returned `rotated` state is rho conjugated by the product unitary that
// brings the witness of its partial transpose to Schmidt form; applying the
// filter to `rotated` is then guaranteed to lift the singlet overlap above
// one half.
struct FilterDerivation {
  Filter filter;
  DensityMatrix rotated;
  SchmidtForm schmidt;
};
FilterDerivation derive_filter(const DensityMatrix& rho);

// True when the witness is already maximally entangled, i.e. the derived
// filter degenerates to the identity.
bool filter_is_identity(const FilterDerivation& derivation);

// Filter diag(c, d)/max(c, d) for the eq10 family, with the same parameter
// constraints as eq10_state.
Filter family_filter(double c, double d);

}  // namespace qdistill

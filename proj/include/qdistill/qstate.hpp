#pragma once

#include <cstdint>

#include "qdistill/qlinalg.hpp"
#include "qdistill/types.hpp"

namespace qdistill {

// Validated two-qubit density matrix: Hermitian within 1e-12, unit trace
// within 1e-12, eigenvalues >= -1e-10.  Construct through make_density.
class DensityMatrix {
 public:
  const Mat4& matrix() const { return mat_; }

 private:
  friend DensityMatrix make_density(const Mat4& mat, bool repair);
  explicit DensityMatrix(const Mat4& m) : mat_(m) {}
  Mat4 mat_;
};

// Strict validation by default; with repair = true, negative eigenvalues are
// clamped to zero and the trace renormalized (used for noisy reconstructions).
DensityMatrix make_density(const Mat4& mat, bool repair = false);

enum class Bell { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

// Unit-norm Bell vectors in the computational basis.
Vec4 bell_state(Bell which);

// Singlet projector P0 = |Psi-><Psi-|.
const Mat4& singlet_projector();

// Werner state f*P0 + (1-f)*(I-P0)/3 for f in [0, 1].
DensityMatrix werner_state(double fidelity);

// Two-parameter mixture p*|psi1><psi1| + (1-p)*|psi2><psi2| with
// psi1 = c*e1⊗e1 + d*e2⊗e2 and psi2 = c*e1⊗e2 + d*e2⊗e1; requires
// c, d > 0, c^2 + d^2 = 1, p in [0, 1].
DensityMatrix eq10_state(double c, double d, double p);

// Convex mixture of Haar-random pure two-qubit states with flat Dirichlet
// weights; a pure function of the seed.
DensityMatrix random_mixed(std::uint64_t seed, int rank_pure_terms);

// Convex mixture of random product states; separable by construction.
DensityMatrix random_separable(std::uint64_t seed, int terms);

// Partial transpose on party B: entry ((i,j),(k,l)) -> ((i,l),(k,j)).
// The result is Hermitian but generally not positive, hence a plain matrix.
Mat4 partial_transpose(const Mat4& mat);
Mat4 partial_transpose(const DensityMatrix& rho);

// (a ⊗ b) rho (a ⊗ b)† renormalized, plus the pre-normalization weight.
// Throws ZeroWeight when the weight falls below 1e-14.
struct LocalResult {
  DensityMatrix state;
  double weight;
};
LocalResult apply_local(const DensityMatrix& rho, const Mat2& a, const Mat2& b);

// Fully entangled fraction: max <psi| rho |psi> over maximally entangled psi,
// parametrized as (I ⊗ U)|Phi+> with U in SU(2).  Coarse 16^3 Euler-angle grid,
// then cyclic coordinate ascent with exact per-angle harmonic maximization and
// a Newton polish down to gradient norm 1e-10.
struct SingletFractionResult {
  double f;
  Vec4 maximizer;
};
SingletFractionResult singlet_fraction(const DensityMatrix& rho);

}  // namespace qdistill

#pragma once

#include <optional>

#include "qdistill/qstate.hpp"
#include "qdistill/types.hpp"

namespace qdistill {

// Pauli expansion rho = (1/4)(I⊗I + r·sigma⊗I + I⊗s·sigma + sum t[n][m] sigma_n⊗sigma_m)
// with t[n][m] = Tr(rho sigma_n⊗sigma_m).
struct HsForm {
  Vec3r r;
  Vec3r s;
  Mat3r t;
};

HsForm decompose(const DensityMatrix& rho);

// Inverse of decompose; validates the result as a density matrix (throws
// NotPositive when the coefficients do not describe a state).  With
// repair = true negative eigenvalues are clamped and the trace renormalized.
DensityMatrix reconstruct(const HsForm& form, bool repair = false);

// N(rho) = sum of the singular values of the T matrix.
double n_value(const DensityMatrix& rho);

// Fidelity (1 + N)/4 when N > 1, otherwise nullopt (the formula only applies
// beyond the N = 1 shell).
std::optional<double> fidelity_from_n(const DensityMatrix& rho);

// SU(2) element realizing a proper rotation: u sigma_a u† = sum_b R[b][a] sigma_b.
Mat2 su2_from_rotation(const Mat3r& rotation);

// Product unitary u1 ⊗ u2 bringing the T matrix to diagonal form diag(d),
// |d| descending, any reflection absorbed into the last entry's sign.
struct TDiagonalization {
  Mat2 u1;
  Mat2 u2;
  Vec3r d;
};
TDiagonalization diagonalize_t(const DensityMatrix& rho);

// Membership in the tetrahedron spanned by (-1,-1,-1), (-1,1,1), (1,-1,1),
// (1,1,-1): every diagonalized state lands inside.  Half-space form with
// slack 1e-9.
bool in_tetrahedron(const Vec3r& d);

// Membership in the octahedron |d1| + |d2| + |d3| <= 1; equals the
// intersection of the tetrahedron with its reflection.
bool in_octahedron(const Vec3r& d);

// For states with r = s = 0 (within 1e-10; otherwise NotTState): separable
// exactly when the diagonalized T lies inside the octahedron.
bool t_state_separable(const DensityMatrix& rho);

// One-stop diagnostic record for reporting.
struct GeometryReport {
  HsForm form;
  Vec3r d;
  double n;
  bool tetrahedron;
  bool octahedron;
  std::optional<double> fidelity;
};
GeometryReport geometry_report(const DensityMatrix& rho);

}  // namespace qdistill

#include "qdistill/inseparability.hpp"

#include <cmath>
#include <sstream>

namespace qdistill {

PptVerdict ppt_test(const DensityMatrix& rho) {
  HermEig4 eig = herm_eig(partial_transpose(rho));
  double min_eig = eig.values(0);
  return {min_eig < -kTolSeparable, min_eig, eig.vectors.col(0)};
}

SchmidtForm schmidt_form(const Vec4& psi) {
  double norm_err = std::abs(psi.norm() - 1);
  if (norm_err > kTolUnitNorm) {
    std::ostringstream msg;
    msg << "schmidt_form: |norm - 1| = " << norm_err << " exceeds " << kTolUnitNorm;
    throw Error(ErrorKind::BadParameter, msg.str());
  }
  // Coefficient matrix M[i][j] = psi_(2i+j); an SVD M = u diag(s) v† gives
  // (u† ⊗ vᵀ) psi = s1 e1⊗e1 + s2 e2⊗e2.
  Mat2 coeff;
  coeff << psi(0), psi(1), psi(2), psi(3);
  Svd2c svd = svd2c(coeff);
  return {svd.s(0), svd.s(1), Mat2(svd.u.adjoint()), Mat2(svd.v.transpose())};
}

FilterDerivation derive_filter(const DensityMatrix& rho) {
  PptVerdict verdict = ppt_test(rho);
  if (!verdict.inseparable) {
    std::ostringstream msg;
    msg << "derive_filter: min partial-transpose eigenvalue " << verdict.min_eigenvalue
        << " is not below -" << kTolSeparable;
    throw Error(ErrorKind::NotInseparable, msg.str());
  }
  SchmidtForm schmidt = schmidt_form(verdict.witness);
  // The partial transpose conjugates party B by the complex conjugate, so to
  // leave the *rotated* state's witness in Schmidt form, B must be rotated by
  // conj(u2) rather than u2.
  DensityMatrix rotated = apply_local(rho, schmidt.u1, schmidt.u2.conjugate()).state;
  Mat2 w = Mat2::Zero();
  w(0, 0) = 1.0;
  w(1, 1) = schmidt.b / schmidt.a;  // a >= 1/sqrt(2) > 0 for any entangled witness
  return {Filter{w, Party::B}, rotated, schmidt};
}

bool filter_is_identity(const FilterDerivation& derivation) {
  return derivation.schmidt.a - derivation.schmidt.b < 1e-9;
}

Filter family_filter(double c, double d) {
  if (!(c > 0) || !(d > 0))
    throw Error(ErrorKind::BadParameter, "family_filter: c and d must be positive");
  if (std::abs(c * c + d * d - 1) > kTolParam)
    throw Error(ErrorKind::BadParameter, "family_filter: c^2 + d^2 must equal 1");
  double peak = std::max(c, d);
  Mat2 w = Mat2::Zero();
  w(0, 0) = c / peak;
  w(1, 1) = d / peak;
  return {w, Party::B};
}

}  // namespace qdistill

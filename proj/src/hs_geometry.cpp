#include "qdistill/hs_geometry.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Geometry>

namespace qdistill {

HsForm decompose(const DensityMatrix& rho) {
  const Mat4& m = rho.matrix();
  HsForm form;
  for (int n = 0; n < 3; ++n) {
    form.r(n) = (kron(sigma(n), Mat2::Identity()) * m).trace().real();
    form.s(n) = (kron(Mat2::Identity(), sigma(n)) * m).trace().real();
    for (int k = 0; k < 3; ++k) form.t(n, k) = (kron(sigma(n), sigma(k)) * m).trace().real();
  }
  return form;
}

DensityMatrix reconstruct(const HsForm& form, bool repair) {
  Mat4 m = Mat4::Identity();
  for (int n = 0; n < 3; ++n) {
    m += form.r(n) * kron(sigma(n), Mat2::Identity());
    m += form.s(n) * kron(Mat2::Identity(), sigma(n));
    for (int k = 0; k < 3; ++k) m += form.t(n, k) * kron(sigma(n), sigma(k));
  }
  return make_density(m / 4.0, repair);
}

double n_value(const DensityMatrix& rho) { return svd3r(decompose(rho).t).d.cwiseAbs().sum(); }

std::optional<double> fidelity_from_n(const DensityMatrix& rho) {
  double n = n_value(rho);
  if (n <= 1) return std::nullopt;
  return (1 + n) / 4.0;
}

Mat2 su2_from_rotation(const Mat3r& rotation) {
  Eigen::Quaterniond q(rotation);
  // U = w - i (x sx + y sy + z sz) satisfies U sigma_a U† = sum_b R[b][a] sigma_b.
  Mat2 u = q.w() * Mat2::Identity() -
           Complex(0, 1) * (q.x() * sigma_x() + q.y() * sigma_y() + q.z() * sigma_z());
  return u;
}

TDiagonalization diagonalize_t(const DensityMatrix& rho) {
  Svd3r svd = svd3r(decompose(rho).t);
  // T transforms as R1 T R2ᵀ under u1 ⊗ u2, so the inverse rotations of the
  // SVD factors take it to diag(d).
  return {su2_from_rotation(svd.o1.transpose()), su2_from_rotation(svd.o2.transpose()), svd.d};
}

bool in_tetrahedron(const Vec3r& d) {
  return (1 - d(0) - d(1) - d(2)) >= -4 * kTolMembership &&
         (1 - d(0) + d(1) + d(2)) >= -4 * kTolMembership &&
         (1 + d(0) - d(1) + d(2)) >= -4 * kTolMembership &&
         (1 + d(0) + d(1) - d(2)) >= -4 * kTolMembership;
}

bool in_octahedron(const Vec3r& d) {
  return d.cwiseAbs().sum() <= 1 + kTolMembership;
}

bool t_state_separable(const DensityMatrix& rho) {
  HsForm form = decompose(rho);
  double local = std::max(form.r.cwiseAbs().maxCoeff(), form.s.cwiseAbs().maxCoeff());
  if (local > 1e-10) {
    std::ostringstream msg;
    msg << "t_state_separable: local vector magnitude " << local << " exceeds 1e-10";
    throw Error(ErrorKind::NotTState, msg.str());
  }
  return in_octahedron(svd3r(form.t).d);
}

GeometryReport geometry_report(const DensityMatrix& rho) {
  GeometryReport rep;
  rep.form = decompose(rho);
  Svd3r svd = svd3r(rep.form.t);
  rep.d = svd.d;
  rep.n = svd.d.cwiseAbs().sum();
  rep.tetrahedron = in_tetrahedron(rep.d);
  rep.octahedron = in_octahedron(rep.d);
  rep.fidelity = rep.n > 1 ? std::optional<double>((1 + rep.n) / 4.0) : std::nullopt;
  return rep;
}

}  // namespace qdistill

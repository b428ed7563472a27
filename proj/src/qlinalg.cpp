#include "qdistill/qlinalg.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace qdistill {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotUnitTrace: return "NotUnitTrace";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotPsd: return "NotPsd";
    case ErrorKind::ZeroWeight: return "ZeroWeight";
    case ErrorKind::NotInseparable: return "NotInseparable";
    case ErrorKind::NotTState: return "NotTState";
    case ErrorKind::FilterTooLarge: return "FilterTooLarge";
    case ErrorKind::FidelityTooLow: return "FidelityTooLow";
    case ErrorKind::NotDistillable: return "NotDistillable";
    case ErrorKind::TargetUnreachable: return "TargetUnreachable";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "UnknownError";
}

const Mat2& sigma_x() {
  static const Mat2 m = (Mat2() << 0, 1, 1, 0).finished();
  return m;
}

const Mat2& sigma_y() {
  static const Mat2 m = (Mat2() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  return m;
}

const Mat2& sigma_z() {
  static const Mat2 m = (Mat2() << 1, 0, 0, -1).finished();
  return m;
}

const Mat2& sigma(int axis) {
  switch (axis) {
    case 0: return sigma_x();
    case 1: return sigma_y();
    case 2: return sigma_z();
    default: throw Error(ErrorKind::BadParameter, "Pauli axis must be 0, 1 or 2");
  }
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

namespace {

template <typename Mat>
double asymmetry(const Mat& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Mat>
void require_hermitian(const Mat& a, const char* where) {
  double asym = asymmetry(a);
  if (asym > kTolHerm) {
    std::ostringstream msg;
    msg << where << ": max |A - A†| entry " << asym << " exceeds " << kTolHerm;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }
}

template <typename Result, typename Mat>
Result herm_eig_impl(const Mat& a) {
  require_hermitian(a, "herm_eig");
  Eigen::SelfAdjointEigenSolver<Mat> solver((a + a.adjoint()) / 2.0);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Mat>
Mat sqrt_psd_impl(const Mat& a) {
  require_hermitian(a, "sqrt_psd");
  Eigen::SelfAdjointEigenSolver<Mat> solver((a + a.adjoint()) / 2.0);
  auto values = solver.eigenvalues();
  if (values(0) < -kTolPsd) {
    std::ostringstream msg;
    msg << "sqrt_psd: eigenvalue " << values(0) << " below -" << kTolPsd;
    throw Error(ErrorKind::NotPsd, msg.str());
  }
  auto roots = values.cwiseMax(0.0).cwiseSqrt();
  Mat out = solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
  return (out + out.adjoint()) / 2.0;
}

}  // namespace

HermEig2 herm_eig(const Mat2& a) { return herm_eig_impl<HermEig2>(a); }
HermEig4 herm_eig(const Mat4& a) { return herm_eig_impl<HermEig4>(a); }

Mat2 sqrt_psd(const Mat2& a) { return sqrt_psd_impl(a); }
Mat4 sqrt_psd(const Mat4& a) { return sqrt_psd_impl(a); }

Svd2c svd2c(const Mat2& a) {
  Eigen::JacobiSVD<Mat2> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Svd3r svd3r(const Mat3r& t) {
  Eigen::JacobiSVD<Mat3r> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3r o1 = svd.matrixU();
  Mat3r o2 = svd.matrixV();
  Vec3r d = svd.singularValues();
  // Push any reflection into the sign of the smallest-magnitude entry so both
  // factors are proper rotations and |d| stays descending.
  if (o1.determinant() < 0) {
    o1.col(2) *= -1;
    d(2) *= -1;
  }
  if (o2.determinant() < 0) {
    o2.col(2) *= -1;
    d(2) *= -1;
  }
  return {o1, d, o2};
}

}  // namespace qdistill

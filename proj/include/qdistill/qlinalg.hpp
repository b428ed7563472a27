#pragma once

#include "qdistill/types.hpp"

namespace qdistill {

// Kronecker product with the row-major index convention (i ⊗ j) -> 2*i + j;
// the left factor is party A throughout the library.
Mat4 kron(const Mat2& a, const Mat2& b);

// Conjugate transpose.
inline Mat2 dagger(const Mat2& a) { return a.adjoint(); }
inline Mat4 dagger(const Mat4& a) { return a.adjoint(); }

// Hermitian eigendecomposition; eigenvalues ascending, eigenvector columns
// orthonormal.  Throws NotHermitian when the input asymmetry exceeds 1e-12.
struct HermEig2 {
  Eigen::Vector2d values;
  Mat2 vectors;
};
struct HermEig4 {
  Eigen::Vector4d values;
  Mat4 vectors;
};
HermEig2 herm_eig(const Mat2& a);
HermEig4 herm_eig(const Mat4& a);

// Complex 2x2 singular value decomposition: a = u * diag(s) * v†,
// s descending and non-negative.
struct Svd2c {
  Mat2 u;
  Eigen::Vector2d s;
  Mat2 v;
};
Svd2c svd2c(const Mat2& a);

// Real 3x3 SVD with both factors special orthogonal: t = o1 * diag(d) * o2ᵀ,
// det(o1) = det(o2) = +1.  Any reflection is absorbed into the sign of the
// smallest-magnitude entry of d, so |d| stays in descending order.
struct Svd3r {
  Mat3r o1;
  Vec3r d;
  Mat3r o2;
};
Svd3r svd3r(const Mat3r& t);

// Principal square root of a positive semidefinite matrix.  Eigenvalues in
// [-1e-10, 0) are clamped to zero; anything lower throws NotPsd.
Mat2 sqrt_psd(const Mat2& a);
Mat4 sqrt_psd(const Mat4& a);

}  // namespace qdistill

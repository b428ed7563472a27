#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>

#include <qdistill/qlinalg.hpp>
#include <qdistill/qstate.hpp>
#include <qdistill/rng.hpp>

using namespace qdistill;

namespace {

Mat2 random_mat2(Rng& rng) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

Mat4 random_herm4(Rng& rng) {
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  return ((m + m.adjoint()) / 2).eval();
}

Mat3r random_rotation3(Rng& rng) {
  Mat3r m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = rng.normal();
  Mat3r q = Eigen::HouseholderQR<Mat3r>(m).householderQ();
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error to be thrown");
  return ErrorKind::BadParameter;
}

}  // namespace

TEST_CASE("kron of identities is the 4x4 identity") {
  CHECK((kron(Mat2::Identity(), Mat2::Identity()) - Mat4::Identity()).norm() == 0.0);
}

TEST_CASE("kron of diagonal Paulis is diag(1,-1,-1,1)") {
  Mat4 zz = kron(sigma_z(), sigma_z());
  Mat4 expected = Mat4::Zero();
  expected.diagonal() << 1, -1, -1, 1;
  CHECK((zz - expected).norm() == 0.0);
}

TEST_CASE("kron matches the elementwise definition") {
  Rng rng(101);
  for (int rep = 0; rep < 50; ++rep) {
    Mat2 a = random_mat2(rng), b = random_mat2(rng);
    Mat4 k = kron(a, b);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q)
            CHECK(std::abs(k(2 * i + p, 2 * j + q) - a(i, j) * b(p, q)) == 0.0);
  }
  // Spot-check one concrete Pauli pair against hand-expanded entries.
  Mat4 xy = kron(sigma_x(), sigma_y());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Complex expected = sigma_x()(i / 2, j / 2) * sigma_y()(i % 2, j % 2);
      CHECK(std::abs(xy(i, j) - expected) == 0.0);
    }
}

TEST_CASE("kron is bilinear and multiplicative on traces") {
  Rng rng(102);
  for (int rep = 0; rep < 50; ++rep) {
    Mat2 a = random_mat2(rng), b = random_mat2(rng), c = random_mat2(rng);
    Complex alpha(rng.normal(), rng.normal());
    CHECK((kron((a + alpha * c).eval(), b) - (kron(a, b) + alpha * kron(c, b))).norm() < 1e-12);
    CHECK((kron(a, (b + alpha * c).eval()) - (kron(a, b) + alpha * kron(a, c))).norm() < 1e-12);
    CHECK(std::abs(kron(a, b).trace() - a.trace() * b.trace()) < 1e-12);
  }
}

TEST_CASE("dagger fixes Hermitian matrices and matches the conj-swap oracle") {
  CHECK((dagger(Mat2(Mat2::Identity())) - Mat2::Identity()).norm() == 0.0);
  CHECK((dagger(sigma_y()) - sigma_y()).norm() == 0.0);
  Rng rng(103);
  for (int rep = 0; rep < 20; ++rep) {
    Mat2 a = random_mat2(rng);
    Mat2 d = dagger(a);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(d(i, j) - std::conj(a(j, i))) == 0.0);
    CHECK((dagger(d) - a).norm() == 0.0);
  }
}

TEST_CASE("herm_eig solves a diagonal 4x4 exactly") {
  Mat4 a = Mat4::Zero();
  a.diagonal() << 3, 1, 2, 0;
  HermEig4 eig = herm_eig(a);
  Eigen::Vector4d expected;
  expected << 0, 1, 2, 3;
  CHECK((eig.values - expected).norm() < 1e-14);
}

TEST_CASE("herm_eig finds the -0.25 eigenvalue of the partially transposed Werner state") {
  Mat4 pt = partial_transpose(werner_state(0.75)).matrix();
  HermEig4 eig = herm_eig(pt);
  CHECK(eig.values(0) == doctest::Approx(-0.25).epsilon(1e-12));
  // Characteristic-polynomial oracle: every reported eigenvalue is a root.
  for (int k = 0; k < 4; ++k) CHECK(std::abs((pt - eig.values(k) * Mat4::Identity()).determinant()) < 1e-12);
}

TEST_CASE("herm_eig of a rank-1 projector gives eigenvalues (0,0,0,1)") {
  Vec4 singlet = bell_state(Bell::PsiMinus);
  Mat4 p0 = singlet * singlet.adjoint();
  HermEig4 eig = herm_eig(p0);
  CHECK(std::abs(eig.values(0)) < 1e-12);
  CHECK(std::abs(eig.values(1)) < 1e-12);
  CHECK(std::abs(eig.values(2)) < 1e-12);
  CHECK(eig.values(3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  Mat4 a = Mat4::Identity();
  a(0, 1) = Complex(0, 1e-6);
  CHECK(kind_of([&] { herm_eig(a); }) == ErrorKind::NotHermitian);
  Mat2 b = Mat2::Identity();
  b(1, 0) = 0.5;
  CHECK(kind_of([&] { herm_eig(b); }) == ErrorKind::NotHermitian);
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices with orthonormal eigenvectors") {
  Rng rng(104);
  for (int rep = 0; rep < 200; ++rep) {
    Mat4 a = random_herm4(rng);
    HermEig4 eig = herm_eig(a);
    for (int k = 1; k < 4; ++k) CHECK(eig.values(k) >= eig.values(k - 1));
    CHECK((eig.vectors.adjoint() * eig.vectors - Mat4::Identity()).norm() < 1e-10);
    Mat4 rebuilt = eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    CHECK((rebuilt - a).norm() < 1e-9);
    for (int k = 0; k < 4; ++k)
      CHECK((a * eig.vectors.col(k) - eig.values(k) * eig.vectors.col(k)).norm() < 1e-10);
    CHECK(std::abs(eig.values.sum() - a.trace().real()) < 1e-11);
  }
}

TEST_CASE("svd2c handles identity and diagonal inputs") {
  CHECK((svd2c(Mat2::Identity()).s - Eigen::Vector2d(1, 1)).norm() < 1e-14);
  Mat2 d = Mat2::Zero();
  d.diagonal() << 0.9, 0.1;
  CHECK((svd2c(d).s - Eigen::Vector2d(0.9, 0.1)).norm() < 1e-14);
}

TEST_CASE("svd2c of the singlet coefficient matrix gives two equal singular values") {
  // psi = sum_ij m(i,j) |e_i e_j> for the singlet (0,1,-1,0)/sqrt(2).
  Mat2 m = Mat2::Zero();
  m(0, 1) = 1 / std::sqrt(2.0);
  m(1, 0) = -1 / std::sqrt(2.0);
  Svd2c dec = svd2c(m);
  CHECK(dec.s(0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(dec.s(1) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK((dec.u * dec.s.cast<Complex>().asDiagonal() * dec.v.adjoint() - m).norm() < 1e-12);
}

TEST_CASE("svd2c reconstructs 1000 random matrices") {
  Rng rng(105);
  for (int rep = 0; rep < 1000; ++rep) {
    Mat2 a = random_mat2(rng);
    Svd2c dec = svd2c(a);
    CHECK(dec.s(0) >= dec.s(1));
    CHECK(dec.s(1) >= 0.0);
    CHECK((dec.u.adjoint() * dec.u - Mat2::Identity()).norm() < 1e-12);
    CHECK((dec.v.adjoint() * dec.v - Mat2::Identity()).norm() < 1e-12);
    CHECK((dec.u * dec.s.cast<Complex>().asDiagonal() * dec.v.adjoint() - a).norm() < 1e-11);
  }
}

TEST_CASE("svd3r handles identity and -identity with proper rotations") {
  Svd3r id = svd3r(Mat3r::Identity());
  CHECK((id.d - Vec3r(1, 1, 1)).norm() < 1e-14);
  Svd3r neg = svd3r((-Mat3r::Identity()).eval());
  CHECK(std::abs(neg.d.cwiseAbs().maxCoeff() - 1) < 1e-14);
  CHECK(std::abs(neg.d.cwiseAbs().minCoeff() - 1) < 1e-14);
  for (const Svd3r& dec : {id, neg}) {
    CHECK(dec.o1.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dec.o2.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK((neg.o1 * neg.d.asDiagonal() * neg.o2.transpose() + Mat3r::Identity()).norm() < 1e-12);
}

TEST_CASE("svd3r recovers the magnitudes of a rotated diagonal") {
  Rng rng(106);
  for (int rep = 0; rep < 100; ++rep) {
    Mat3r r1 = random_rotation3(rng), r2 = random_rotation3(rng);
    Vec3r diag(0.9, 0.5, 0.1);
    Mat3r t = r1 * diag.asDiagonal() * r2.transpose();
    Svd3r dec = svd3r(t);
    CHECK((dec.d.cwiseAbs() - diag).norm() < 1e-12);
    CHECK((dec.o1 * dec.d.asDiagonal() * dec.o2.transpose() - t).norm() < 1e-12);
  }
}

TEST_CASE("svd3r reconstructs 1000 random matrices with SO(3) factors") {
  Rng rng(107);
  for (int rep = 0; rep < 1000; ++rep) {
    Mat3r t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t(i, j) = rng.normal();
    Svd3r dec = svd3r(t);
    CHECK(dec.o1.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(dec.o2.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((dec.o1.transpose() * dec.o1 - Mat3r::Identity()).norm() < 1e-12);
    CHECK((dec.o2.transpose() * dec.o2 - Mat3r::Identity()).norm() < 1e-12);
    CHECK(std::abs(dec.d(0)) + 1e-15 >= std::abs(dec.d(1)));
    CHECK(std::abs(dec.d(1)) + 1e-15 >= std::abs(dec.d(2)));
    CHECK((dec.o1 * dec.d.asDiagonal() * dec.o2.transpose() - t).norm() < 1e-11);
  }
}

TEST_CASE("sqrt_psd of simple diagonal matrices") {
  CHECK((sqrt_psd(Mat2(Mat2::Identity())) - Mat2::Identity()).norm() < 1e-12);
  Mat2 d = Mat2::Zero();
  d.diagonal() << 4, 9;
  Mat2 expected = Mat2::Zero();
  expected.diagonal() << 2, 3;
  CHECK((sqrt_psd(d) - expected).norm() < 1e-12);
}

TEST_CASE("sqrt_psd builds the complement of a filter") {
  Mat2 w = Mat2::Zero();
  w.diagonal() << 1, 0.5;
  Mat2 complement = sqrt_psd((Mat2::Identity() - dagger(w) * w).eval());
  Mat2 expected = Mat2::Zero();
  expected.diagonal() << 0, std::sqrt(0.75);
  CHECK((complement - expected).norm() < 1e-12);
  CHECK((complement * complement + dagger(w) * w - Mat2::Identity()).norm() < 1e-9);
}

TEST_CASE("sqrt_psd rejects matrices with a clearly negative eigenvalue") {
  Mat2 bad = Mat2::Identity();
  bad(1, 1) = -1e-6;
  CHECK(kind_of([&] { sqrt_psd(bad); }) == ErrorKind::NotPsd);
  Mat4 bad4 = Mat4::Identity();
  bad4(3, 3) = -0.5;
  CHECK(kind_of([&] { sqrt_psd(bad4); }) == ErrorKind::NotPsd);
}

TEST_CASE("sqrt_psd squares back to the input on random PSD matrices") {
  Rng rng(108);
  for (int rep = 0; rep < 200; ++rep) {
    Mat2 a = random_mat2(rng);
    Mat2 psd = (a * a.adjoint()).eval();
    Mat2 r = sqrt_psd(psd);
    CHECK((r - r.adjoint()).norm() < 1e-10);
    CHECK((r * r - psd).norm() < 1e-9);
    Mat4 h = random_herm4(rng);
    Mat4 psd4 = (h * h).eval();
    Mat4 r4 = sqrt_psd(psd4);
    CHECK((r4 * r4 - psd4).norm() < 1e-9);
  }
}

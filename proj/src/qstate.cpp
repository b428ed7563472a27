#include "qdistill/qstate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qdistill/rng.hpp"

namespace qdistill {

namespace {

void require_param(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::BadParameter, what);
}

}  // namespace

DensityMatrix make_density(const Mat4& mat, bool repair) {
  double asym = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kTolHerm) {
    std::ostringstream msg;
    msg << "make_density: max |A - A†| entry " << asym << " exceeds " << kTolHerm;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }
  Mat4 herm = (mat + mat.adjoint()) / 2.0;

  if (repair) {
    // Clamp negative eigenvalues and renormalize; used for reconstructions
    // from sampled expectation values.
    HermEig4 eig = herm_eig(herm);
    Eigen::Vector4d clamped = eig.values.cwiseMax(0.0);
    double total = clamped.sum();
    if (total <= 0) throw Error(ErrorKind::NotPositive, "make_density: no positive weight left after repair");
    Mat4 rebuilt = eig.vectors * (clamped / total).asDiagonal() * eig.vectors.adjoint();
    return DensityMatrix((rebuilt + rebuilt.adjoint()) / 2.0);
  }

  double trace_err = std::abs(herm.trace() - Complex(1, 0));
  if (trace_err > kTolTrace) {
    std::ostringstream msg;
    msg << "make_density: |trace - 1| = " << trace_err << " exceeds " << kTolTrace;
    throw Error(ErrorKind::NotUnitTrace, msg.str());
  }
  HermEig4 eig = herm_eig(herm);
  if (eig.values(0) < -kTolStateEig) {
    std::ostringstream msg;
    msg << "make_density: eigenvalue " << eig.values(0) << " below -" << kTolStateEig;
    throw Error(ErrorKind::NotPositive, msg.str());
  }
  return DensityMatrix(herm);
}

Vec4 bell_state(Bell which) {
  const double inv = 1.0 / std::sqrt(2.0);
  Vec4 v = Vec4::Zero();
  switch (which) {
    case Bell::PhiPlus: v(0) = inv; v(3) = inv; break;
    case Bell::PhiMinus: v(0) = inv; v(3) = -inv; break;
    case Bell::PsiPlus: v(1) = inv; v(2) = inv; break;
    case Bell::PsiMinus: v(1) = inv; v(2) = -inv; break;
  }
  return v;
}

const Mat4& singlet_projector() {
  static const Mat4 p = [] {
    Vec4 v = bell_state(Bell::PsiMinus);
    return Mat4(v * v.adjoint());
  }();
  return p;
}

DensityMatrix werner_state(double fidelity) {
  require_param(fidelity >= -kTolParam && fidelity <= 1 + kTolParam,
                "werner_state: fidelity must lie in [0, 1]");
  double f = std::clamp(fidelity, 0.0, 1.0);
  Mat4 mat = f * singlet_projector() + (1 - f) / 3.0 * (Mat4::Identity() - singlet_projector());
  return make_density(mat);
}

DensityMatrix eq10_state(double c, double d, double p) {
  require_param(c > 0 && d > 0, "eq10_state: c and d must be positive");
  require_param(std::abs(c * c + d * d - 1) <= kTolParam, "eq10_state: c^2 + d^2 must equal 1");
  require_param(p >= -kTolParam && p <= 1 + kTolParam, "eq10_state: p must lie in [0, 1]");
  p = std::clamp(p, 0.0, 1.0);
  Vec4 psi1 = Vec4::Zero(), psi2 = Vec4::Zero();
  psi1(0) = c;  // c e1⊗e1 + d e2⊗e2
  psi1(3) = d;
  psi2(1) = c;  // c e1⊗e2 + d e2⊗e1
  psi2(2) = d;
  Mat4 mat = p * (psi1 * psi1.adjoint()) + (1 - p) * (psi2 * psi2.adjoint());
  return make_density(mat);
}

namespace {

Vec4 haar_pure4(Rng& rng) {
  Vec4 v;
  for (int i = 0; i < 4; ++i) v(i) = Complex(rng.normal(), rng.normal());
  return v / v.norm();
}

Vec2 haar_pure2(Rng& rng) {
  Vec2 v;
  for (int i = 0; i < 2; ++i) v(i) = Complex(rng.normal(), rng.normal());
  return v / v.norm();
}

std::vector<double> dirichlet_flat(Rng& rng, int terms) {
  std::vector<double> w(terms);
  double total = 0;
  for (double& x : w) {
    x = -std::log(1.0 - rng.uniform());
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

}  // namespace

DensityMatrix random_mixed(std::uint64_t seed, int rank_pure_terms) {
  require_param(rank_pure_terms >= 1, "random_mixed: rank_pure_terms must be >= 1");
  Rng rng(seed);
  std::vector<double> weights = dirichlet_flat(rng, rank_pure_terms);
  Mat4 mat = Mat4::Zero();
  for (double w : weights) {
    Vec4 psi = haar_pure4(rng);
    mat += w * (psi * psi.adjoint());
  }
  return make_density(mat);
}

DensityMatrix random_separable(std::uint64_t seed, int terms) {
  require_param(terms >= 1, "random_separable: terms must be >= 1");
  Rng rng(seed);
  std::vector<double> weights = dirichlet_flat(rng, terms);
  Mat4 mat = Mat4::Zero();
  for (double w : weights) {
    Vec2 a = haar_pure2(rng);
    Vec2 b = haar_pure2(rng);
    mat += w * kron(Mat2(a * a.adjoint()), Mat2(b * b.adjoint()));
  }
  return make_density(mat);
}

Mat4 partial_transpose(const Mat4& mat) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) = mat(2 * i + l, 2 * k + j);
  return out;
}

Mat4 partial_transpose(const DensityMatrix& rho) { return partial_transpose(rho.matrix()); }

LocalResult apply_local(const DensityMatrix& rho, const Mat2& a, const Mat2& b) {
  Mat4 op = kron(a, b);
  Mat4 mapped = op * rho.matrix() * op.adjoint();
  double weight = mapped.trace().real();
  if (weight <= kZeroWeight) {
    std::ostringstream msg;
    msg << "apply_local: outcome weight " << weight << " at or below " << kZeroWeight;
    throw Error(ErrorKind::ZeroWeight, msg.str());
  }
  Mat4 normalized = mapped / weight;
  normalized /= normalized.trace().real();  // kill residual drift
  return {make_density((normalized + normalized.adjoint()) / 2.0), weight};
}

namespace {

// Trial vector (I ⊗ U)|Phi+> for U = Rz(alpha) Ry(beta) Rz(gamma); components
// are (U00, U10, U01, U11)/sqrt(2) in the computational basis.
Vec4 entangled_trial(double alpha, double beta, double gamma) {
  double cb = std::cos(beta / 2), sb = std::sin(beta / 2);
  Complex sum_phase = std::polar(1.0, -(alpha + gamma) / 2);
  Complex diff_phase = std::polar(1.0, -(alpha - gamma) / 2);
  Vec4 psi;
  const double inv = 1.0 / std::sqrt(2.0);
  psi(0) = sum_phase * cb * inv;             // U00
  psi(1) = std::conj(diff_phase) * sb * inv; // U10
  psi(2) = -diff_phase * sb * inv;           // U01
  psi(3) = std::conj(sum_phase) * cb * inv;  // U11
  return psi;
}

double entangled_overlap(const Mat4& rho, const std::array<double, 3>& angles) {
  Vec4 psi = entangled_trial(angles[0], angles[1], angles[2]);
  return psi.dot(rho * psi).real();
}

// Each Euler angle enters the trial vector through frequency-1/2 phases, so
// the overlap restricted to one coordinate is a single harmonic
// c0 + R cos(theta - phase).  Two extra evaluations at +-2pi/3 recover the
// harmonic exactly and let the update jump straight to the slice maximum.
double coord_max(const Mat4& rho, std::array<double, 3>& angles, int coord, double f_now) {
  constexpr double kThird = 2 * M_PI / 3;
  double t = angles[coord];
  std::array<double, 3> probe = angles;
  probe[coord] = t + kThird;
  double fp = entangled_overlap(rho, probe);
  probe[coord] = t - kThird;
  double fm = entangled_overlap(rho, probe);
  double c0 = (f_now + fp + fm) / 3;
  double u = f_now - c0;
  double v = (fp - fm) / std::sqrt(3.0);
  if (std::hypot(u, v) < 1e-18) return f_now;  // flat slice
  angles[coord] = t + std::atan2(v, u);
  return entangled_overlap(rho, angles);
}

struct RefineOutcome {
  std::array<double, 3> angles;
  double value;
};

// Exact cyclic coordinate ascent followed by a Newton polish on all three
// angles (finite-difference derivatives); the polish repairs the slow
// coordinate-wise convergence along diagonal ridges and drives the gradient
// norm below 1e-10.
RefineOutcome refine(const Mat4& rho, std::array<double, 3> start) {
  std::array<double, 3> angles = start;
  double value = entangled_overlap(rho, angles);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double before = value;
    for (int coord = 0; coord < 3; ++coord) value = coord_max(rho, angles, coord, value);
    if (value - before < 1e-14) break;
  }

  auto eval = [&](const std::array<double, 3>& x) { return entangled_overlap(rho, x); };
  constexpr double hg = 1e-6, hh = 1e-4;
  for (int iter = 0; iter < 30; ++iter) {
    Eigen::Vector3d g;
    for (int i = 0; i < 3; ++i) {
      std::array<double, 3> p = angles, m = angles;
      p[i] += hg;
      m[i] -= hg;
      g(i) = (eval(p) - eval(m)) / (2 * hg);
    }
    if (g.norm() < 1e-11) break;
    Eigen::Matrix3d h;
    for (int i = 0; i < 3; ++i) {
      std::array<double, 3> p = angles, m = angles;
      p[i] += hh;
      m[i] -= hh;
      h(i, i) = (eval(p) - 2 * value + eval(m)) / (hh * hh);
      for (int j = i + 1; j < 3; ++j) {
        std::array<double, 3> pp = angles, pm = angles, mp = angles, mm = angles;
        pp[i] += hh, pp[j] += hh;
        pm[i] += hh, pm[j] -= hh;
        mp[i] -= hh, mp[j] += hh;
        mm[i] -= hh, mm[j] -= hh;
        h(i, j) = h(j, i) = (eval(pp) - eval(pm) - eval(mp) + eval(mm)) / (4 * hh * hh);
      }
    }
    Eigen::Vector3d step = -h.ldlt().solve(g).eval();
    if (!step.allFinite() || step.dot(g) <= 0) step = g;  // ascent fallback
    if (step.norm() > 0.3) step *= 0.3 / step.norm();
    bool improved = false;
    for (int halve = 0; halve < 8 && !improved; ++halve) {
      std::array<double, 3> trial = angles;
      for (int i = 0; i < 3; ++i) trial[i] += step(i);
      double f_trial = eval(trial);
      if (f_trial > value) {
        angles = trial;
        value = f_trial;
        improved = true;
      }
      step /= 2;
    }
    if (!improved) break;  // at the resolution limit
  }
  return {angles, value};
}

}  // namespace

SingletFractionResult singlet_fraction(const DensityMatrix& rho) {
  constexpr int kGrid = 16;
  const double step = 2 * M_PI / kGrid;
  const Mat4& mat = rho.matrix();

  // Coarse scan, keeping the best few starts for refinement.
  constexpr int kStarts = 3;
  std::array<std::pair<double, std::array<double, 3>>, kStarts> top;
  top.fill({-1.0, {0, 0, 0}});
  for (int ia = 0; ia < kGrid; ++ia)
    for (int ib = 0; ib < kGrid; ++ib)
      for (int ic = 0; ic < kGrid; ++ic) {
        std::array<double, 3> angles = {ia * step, ib * step, ic * step};
        double f = entangled_overlap(mat, angles);
        if (f > top.back().first) {
          top.back() = {f, angles};
          std::sort(top.begin(), top.end(),
                    [](const auto& l, const auto& r) { return l.first > r.first; });
        }
      }

  RefineOutcome best{top[0].second, top[0].first};
  for (const auto& [f0, start] : top) {
    RefineOutcome out = refine(mat, start);
    if (out.value > best.value) best = out;
  }
  return {best.value, entangled_trial(best.angles[0], best.angles[1], best.angles[2])};
}

}  // namespace qdistill

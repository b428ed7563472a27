#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qdistill {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Mat3r = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;
using Vec3r = Eigen::Vector3d;

// Shared numerical tolerances.  Validation thresholds are deliberately looser
// than double roundoff so that exact algebra never trips them, while genuinely
// broken inputs always do.
inline constexpr double kTolHerm = 1e-12;        // Hermiticity (max entry asymmetry)
inline constexpr double kTolTrace = 1e-12;       // unit-trace drift
inline constexpr double kTolStateEig = 1e-10;    // density-matrix positivity floor
inline constexpr double kTolPsd = 1e-10;         // sqrt_psd positivity floor
inline constexpr double kTolUnitNorm = 1e-12;    // pure-state normalization
inline constexpr double kTolParam = 1e-12;       // scalar parameter constraints
inline constexpr double kTolSeparable = 1e-10;   // PPT verdict threshold on min eigenvalue
inline constexpr double kTolMembership = 1e-9;   // polytope membership slack
inline constexpr double kZeroWeight = 1e-14;     // smallest meaningful branch probability
inline constexpr double kMinBranchWeight = 1e-6; // recursion cutoff on path probability

enum class ErrorKind {
  NotHermitian,
  NotUnitTrace,
  NotPositive,
  NotPsd,
  ZeroWeight,
  NotInseparable,
  NotTState,
  FilterTooLarge,
  FidelityTooLow,
  NotDistillable,
  TargetUnreachable,
  BadParameter,
  ParseError,
};

const char* to_string(ErrorKind kind);

// Single exception type for every contract violation; `kind` drives the CLI
// exit-code mapping, `what()` names the violated invariant and its magnitude.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Pauli matrices, indexed 0,1,2 = x,y,z.
const Mat2& sigma(int axis);
const Mat2& sigma_x();
const Mat2& sigma_y();
const Mat2& sigma_z();

}  // namespace qdistill

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace slgeo {

using Complex = std::complex<double>;

// Point of C^m, stored as m complex coordinates. The flat real layout
// (Re z_1, Im z_1, ..., Re z_m, Im z_m) appears only at the CSV boundary.
using ComplexPoint = Eigen::VectorXcd;

// Tangent vector of C^m ≅ R^{2m}; same storage as ComplexPoint.
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidDimensionError : Error { using Error::Error; };
struct RankDeficiencyError : Error { using Error::Error; };
struct InvalidVolumeError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct OffQuadricError : Error { using Error::Error; };
struct EmptySampleError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct DegenerateComparisonError : Error { using Error::Error; };
struct PathSingularityError : Error { using Error::Error; };
struct GeometryError : Error { using Error::Error; };
struct NormalizationError : Error { using Error::Error; };
struct InconsistencyError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

// Residual tolerance for closed-form inputs, where only rounding error is
// expected.
inline constexpr double kResidualTol = 1e-10;

// Oriented tangent m-frame at a point of C^m.
struct TangentFrame {
  ComplexPoint base;
  CMatrix vectors;   // m columns, tangent vectors of C^m ≅ R^{2m}
  int orientation = +1;

  int m() const { return static_cast<int>(vectors.rows()); }
};

struct SLResidual {
  double omega_norm = 0;    // max |ω(v_i, v_j)| over orthonormalized pairs
  double im_omega_val = 0;  // Im Ω on the orthonormalized frame
  double calib_ratio = 0;   // Re Ω on the orthonormalized frame

  bool special(double tol = kResidualTol) const {
    return omega_norm <= tol && std::abs(im_omega_val) <= tol;
  }
};

}  // namespace slgeo

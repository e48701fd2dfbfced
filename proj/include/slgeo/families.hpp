#pragma once

#include <vector>

#include "slgeo/calib.hpp"

namespace slgeo {

enum class FamilyKind { kHlCone, kHlDesing, kSo3, kQuadric, kBranched };

// Parameters of one explicit special Lagrangian family in C^3.
struct FamilySpec {
  FamilyKind kind = FamilyKind::kHlCone;
  double t = 0;          // kHlDesing, kSo3 (t > 0)
  int a1 = 1, a2 = 1;    // kQuadric: positive coprime weights, a3 = -a1-a2
  double c = 0;          // kQuadric level
  CVector u, v;          // kBranched: ω(u,v) = 0, linearly independent

  int a3() const { return -(a1 + a2); }
  bool is_cone() const {
    return kind == FamilyKind::kHlCone || (kind == FamilyKind::kQuadric && c == 0);
  }
  void validate() const;
};

struct SampleCloud {
  std::vector<ComplexPoint> points;
  std::vector<TangentFrame> frames;  // optional; frame bases are cloud members
  FamilySpec family;
};

// Dilation family: t = 0 is the torus cone with |z_1| = |z_2| = |z_3|, and
// t > 0 its nonsingular S^1 x R^2 desingularization; (t, θ, z) maps to
// ((|z|^2 + t^2)^{1/2} e^{iθ}, z, e^{-iθ} conj(z)).
ComplexPoint hl_point(double t, double theta, Complex z);

// SO(3)-orbit family: e^{iθ} r dir with r = t (sin 3θ)^{-1/3}, θ in (0, π/3).
ComplexPoint so3_point(double t, double theta, const Eigen::Vector3d& dir);

// Rotating-quadric family: (e^{i a1 θ} x_1, e^{i a2 θ} x_2, i e^{i a3 θ} x_3)
// over the quadric a1 x_1^2 + a2 x_2^2 + a3 x_3^2 = c.
ComplexPoint quadric_point(int a1, int a2, double c, double theta,
                           const Eigen::Vector3d& x);

// Conjugate-bilinear cross product on C^3:
// (r x s)_1 = (conj(r_2) conj(s_3) - conj(r_3) conj(s_2)) / 2, cyclically.
ComplexPoint cross3(const ComplexPoint& r, const ComplexPoint& s);

// Leading-order branched double cover of the plane spanned by u, v, u x v:
// (x + g(u,v) t^2/4) u + (y^2 - |u|^2 t^2/4) v + 2 y t (u x v).
// Approximate by construction: the omitted remainder is
// O(x^2 + |xy| + |xt| + |y|^3 + |t|^3).
ComplexPoint branched_model_point(const CVector& u, const CVector& v,
                                  double x, double y, double t);

// Membership residual for the dilation family: max deviation from
// |z_1|^2 - t^2 = |z_2|^2 = |z_3|^2, Im(z_1 z_2 z_3) = 0, Re(z_1 z_2 z_3) >= 0.
double hl_membership(const ComplexPoint& p, double t);

struct SampleOptions {
  int count = 1000;
  uint64_t seed = 1;
  bool frames = true;
  double fd_step = 1e-5;  // central differences on the parametrization
};

// Random samples of a family, with finite-difference tangent frames.
SampleCloud sample_family(const FamilySpec& spec, const SampleOptions& opt);

// One-sided Hausdorff distance from the cloud points inside the ball of the
// given radius to the cone. Nearest-neighbor over <= 10^4 cone samples, then
// a Gauss-Newton projection onto the cone parametrization (pure sample
// nearest-neighbor overestimates the distance by the sampling gap).
double asymptotic_cone_distance(const SampleCloud& cloud, const FamilySpec& cone,
                                double radius);

}  // namespace slgeo

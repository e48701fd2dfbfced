#pragma once

#include "slgeo/u1pde.hpp"

namespace slgeo {

struct FiberKey {
  double a = 0, b = 0, c = 0;
};

struct KeyBox {
  double amin = -1, amax = 1;
  double bmin = -1, bmax = 1;
  double cmin = -1, cmax = 1;
  bool contains(const FiberKey& k) const {
    return k.a >= amin && k.a <= amax && k.b >= bmin && k.b <= bmax && k.c >= cmin &&
           k.c <= cmax;
  }
};

// Boundary-data family Phi(a,b,c) = base + b x + c y over a fixed mesh. For
// keys sharing a, the difference of two members is linear and so has exactly
// one local maximum and one local minimum on the convex boundary; fibers
// built from such data are pairwise disjoint.
struct BoundaryFamily {
  std::shared_ptr<const DomainMesh> mesh;
  BoundaryFn base;  // may be empty: zero base data
  KeyBox box;

  double phi(const FiberKey& key, double x, double y) const {
    return (base ? base(x, y) : 0.0) + key.b * x + key.c * y;
  }
  BoundaryFn boundary_fn(const FiberKey& key) const {
    return [this, key](double x, double y) { return phi(key, x, y); };
  }
};

// Counts strict local extrema of the difference of two boundary members
// along the boundary polyline; returns true when there is exactly one
// maximum and one minimum.
bool validate_extrema(const DomainMesh& mesh, const BoundaryFn& diff);

struct FiberBuild {
  FiberKey key;
  PotentialField potential;
  UVField uv;
  SampleCloud cloud;
};

// Solve the boundary-value problem for the key and lift the solution data to
// a fiber in C^3.
FiberBuild build_fiber(const BoundaryFamily& family, const FiberKey& key,
                       const LiftOptions& lift = {}, const SolveOptions& solve = {});

// The piecewise-smooth fibration of C^3:
//   2a = |z_1|^2 - |z_2|^2,
//   b  = z_3                              if a = z_1 = z_2 = 0,
//   b  = z_3 + conj(z_1 z_2)/|z_1|        if a >= 0, z_1 != 0,
//   b  = z_3 + conj(z_1 z_2)/|z_2|        if a < 0.
// Continuous everywhere, smooth away from |z_1| = |z_2|.
std::pair<double, Complex> explicit_fibration(const ComplexPoint& z);

struct ExplicitFiberReport {
  double max_a_variation = 0;
  double max_b_variation = 0;
  double max_sl_residual = 0;     // omega / Im-volume residual over frames
  bool contains_singular_point = false;  // exact hit of (0, 0, b) when a = 0
};

// Samples the fiber over (a, b), confirms the fibration map is constant on
// it, and measures calibration residuals of finite-difference frames.
ExplicitFiberReport explicit_fiber_check(double a, Complex b, int n_samples);

// Closed-form parametrization of the explicit fiber over (a, b).
ComplexPoint explicit_fiber_point(double a, Complex b, double theta, Complex w);

struct FluxOptions {
  int cycle_samples = 96;   // resolution of each 1-cycle
  double loop_scale = 0.6;  // inward scaling of the planar loop cycle
  double step_sup = 0;      // max sup-norm gap between adjacent solutions
                            // (0: 0.1 * mesh spacing), else subdivide
  int max_subdivide = 8;
  LiftOptions lift = {};
};

// Accumulated symplectic-area periods over the cylinders a key path sweeps
// above the fiber 1-cycles (the invariant circle and an inward boundary-
// parallel loop). Additive under concatenation, odd under reversal, and
// null over closed paths.
Eigen::VectorXd flux_coordinates(const BoundaryFamily& family,
                                 const std::vector<FiberKey>& path,
                                 const FluxOptions& opt = {});

}  // namespace slgeo

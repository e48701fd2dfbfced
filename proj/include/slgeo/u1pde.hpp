#pragma once

#include <array>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "slgeo/families.hpp"

namespace slgeo {

// Strictly convex planar domain, symmetric under (x, y) -> (x, -y).
class DomainShape {
 public:
  virtual ~DomainShape() = default;
  virtual double implicit(double x, double y) const = 0;  // < 0 inside
  virtual Eigen::Vector2d boundary_point(double theta) const = 0;
  virtual double bound_radius() const = 0;
};

class Disk : public DomainShape {
 public:
  explicit Disk(double radius = 1.0);
  double implicit(double x, double y) const override;
  Eigen::Vector2d boundary_point(double theta) const override;
  double bound_radius() const override { return radius_; }

 private:
  double radius_;
};

class EllipseShape : public DomainShape {
 public:
  EllipseShape(double rx, double ry, double cx = 0.0);
  double implicit(double x, double y) const override;
  Eigen::Vector2d boundary_point(double theta) const override;
  double bound_radius() const override { return std::abs(cx_) + std::max(rx_, ry_); }

 private:
  double rx_, ry_, cx_;
};

// Axis-aligned interior grid of the domain with cut-cell boundary arms:
// where a lattice neighbor falls outside, the stencil arm is shortened to
// the boundary intersection and the Dirichlet value is applied there.
struct DomainMesh {
  double h = 0;
  std::vector<Eigen::Vector2d> nodes;       // interior lattice nodes
  std::vector<std::array<int, 2>> lattice;  // integer lattice coordinates

  struct Arm {
    int nbr = -1;        // interior neighbor id, or -1 for a boundary cut
    double len = 0;      // arm length (= h for interior arms)
    double bx = 0, by = 0;  // cut point, valid when nbr < 0
  };
  std::vector<std::array<Arm, 4>> arms;  // W, E, S, N

  std::vector<Eigen::Vector2d> boundary;  // ordered polyline, counterclockwise
  std::vector<Eigen::Vector2d> normals;   // outward unit normals

  std::unordered_map<long long, int> node_index;
  int node_at(int i, int j) const;
  int nearest_node(double x, double y) const;
};

using BoundaryFn = std::function<double(double, double)>;

std::shared_ptr<const DomainMesh> build_mesh(const DomainShape& shape, double h,
                                             int boundary_samples = 720);

struct PotentialField {
  std::shared_ptr<const DomainMesh> mesh;
  Eigen::VectorXd f;  // per interior node
  double a = 0;
  std::vector<std::array<double, 4>> arm_phi;  // Dirichlet values at cut points
  Eigen::VectorXd boundary_phi;                // along mesh->boundary

  // solver diagnostics
  double residual_inf = 0;
  int newton_iters = 0;
  std::vector<double> continuation_tail;  // sup-norm gaps of the a -> 0 limit
};

struct UVField {
  std::shared_ptr<const DomainMesh> mesh;
  Eigen::VectorXd u, v;
  double a = 0;
};

struct SolveOptions {
  double tol = 0;           // 0: pick by |a| (1e-8, relaxed to 1e-6 near a = 0)
  int max_newton = 60;
  double continuation_gap = 1e-6;  // stop threshold for the a -> 0 limit
  int max_continuation = 40;
  const Eigen::VectorXd* initial = nullptr;  // optional Newton start
};

// Dirichlet solve of the potential equation
//   ((f_x)^2 + y^2 + a^2)^{-1/2} f_xx + 2 f_yy = 0,  f = phi on the boundary,
// by damped Newton on the cut-cell discretization. a = 0 is reached by
// continuation a_k = 2^{-k} from the a = 1 solution.
PotentialField solve_dirichlet(std::shared_ptr<const DomainMesh> mesh,
                               const BoundaryFn& phi, double a,
                               const SolveOptions& opt = {});

// Max-norm of the discrete interior residual of the potential equation.
double potential_residual(const PotentialField& field);

// u = f_y, v = f_x by arm-aware central differences.
UVField potential_to_uv(const PotentialField& field);

struct CRResidual {
  Eigen::VectorXd r1;  // u_x - v_y
  Eigen::VectorXd r2;  // v_x + 2 (v^2 + y^2 + a^2)^{1/2} u_y
  std::vector<uint8_t> interior;     // 1 where the full stencil is interior
  std::vector<uint8_t> exceptional;  // a = 0 nodes near the singular axis
};

// Residuals of the nonlinear Cauchy-Riemann system satisfied by special
// Lagrangian data. For a = 0, nodes on the x-axis with small v are marked
// exceptional: the fields need not be differentiable there.
CRResidual cr_residual(const UVField& field);

struct SingularPoint {
  double x = 0;
  int multiplicity = 1;
  int type_tag = 1;  // parity heuristic: 1 when v is odd in y near the point
};

struct SingularScan {
  bool whole_axis = false;  // v vanishes along the entire x-axis
  std::vector<SingularPoint> points;
};

// Zeros of v along the symmetry axis (the singular points of the lifted
// 3-fold when a = 0). Empty for a != 0, where the lift is nonsingular.
SingularScan detect_singular_points(const UVField& field, double axis_tol = 1e-8);

struct ZeroPoint {
  double x = 0, y = 0;
  int multiplicity = 0;
};

// Interior zeros of (u1 - u2, v1 - v2) with winding-number multiplicities
// on circuits of radius 3h around detected candidates.
std::vector<ZeroPoint> count_zeros(const UVField& f1, const UVField& f2);

struct LiftOptions {
  int n_psi = 16;   // circle resolution of the invariant direction
  int stride = 1;   // node subsampling
  bool frames = true;
};

// One point of the invariant lift: z_1 z_2 = v + i y, z_3 = x + i u,
// |z_1|^2 - |z_2|^2 = 2a, at circle phase psi. The circle acts by
// (z_1, z_2, z_3) -> (e^{i psi} z_1, e^{-i psi} z_2, z_3).
ComplexPoint lift_point(double a, double x, double y, double u, double v, double psi);

// Samples of the 3-fold  z_1 z_2 = v + i y,  z_3 = x + i u,
// |z_1|^2 - |z_2|^2 = 2a  over the mesh and the invariant circle.
SampleCloud lift_to_sl3(const UVField& field, const LiftOptions& opt = {});

// Closed-form (u, v) data of the dilation family in this chart:
//   u = -y / sqrt(rho + t^2),  v = x sqrt(rho + t^2),
//   rho = (x^2 - t^2 + sqrt((x^2 - t^2)^2 + 4(y^2 + x^2 t^2))) / 2,
// solving the defining relations of the family with 2a = t^2.
void hl_uv(double t, double x, double y, double& u, double& v);
UVField hl_uv_field(std::shared_ptr<const DomainMesh> mesh, double t);

// Bilinear interpolation of a node field, with nearest-node fallback next to
// the boundary.
class GridInterp {
 public:
  GridInterp(const DomainMesh& mesh, const Eigen::VectorXd& values);
  double operator()(double x, double y) const;

 private:
  const DomainMesh& mesh_;
  const Eigen::VectorXd& values_;
};

}  // namespace slgeo

#pragma once

#include <variant>
#include <vector>

#include "slgeo/types.hpp"

namespace slgeo {

// Flat torus R^2 / Λ with the Euclidean metric; the columns of `basis` span
// the lattice Λ. Eigenvalues are 4 π^2 |μ|^2 over the dual lattice.
struct TorusLattice {
  Eigen::Matrix2d basis;
};

// Round sphere S^dim of the given radius: eigenvalues k (k + dim - 1) / r^2
// with the harmonic-polynomial multiplicities.
struct SphereLink {
  int dim = 2;
  double radius = 1.0;
};

// Triangulated link surface. `corner_pos` carries the flat per-face corner
// geometry, which may differ from the shared vertex positions on periodic
// (torus) meshes; for an embedded mesh it repeats the vertex positions.
struct TriMesh {
  Eigen::MatrixXd vertices;               // #V x d
  Eigen::MatrixXi faces;                  // #F x 3
  std::vector<Eigen::Matrix3d> corner_pos;  // per face: 3 columns, padded to 3D

  int nv() const { return static_cast<int>(vertices.rows()); }
  int nf() const { return static_cast<int>(faces.rows()); }
};

using LinkSpec = std::variant<TorusLattice, SphereLink, TriMesh>;

struct Spectrum {
  std::vector<double> values;       // strictly increasing, starting at 0
  std::vector<int> multiplicities;  // positive

  int count() const { return static_cast<int>(values.size()); }
  void validate() const;
};

struct ConeData {
  int m = 3;        // ambient complex dimension, > 2
  int b0_link = 1;  // connected components of the link
  int dim_g = 0;    // dimension of the preserving unitary symmetry group
  Spectrum spectrum;
};

// Lowest `count` Laplace eigenvalue groups of the link. Flat tori by dual
// lattice enumeration, spheres by the classical formula, meshes by
// piecewise-linear finite elements (subspace iteration on the generalized
// problem). Grouping tolerance: 1e-6 relative (analytic), 1e-3 (mesh).
Spectrum link_spectrum(const LinkSpec& link, int count);

// Real orders alpha with alpha (alpha + m - 2) an eigenvalue, inside the
// given range, with the eigenvalue multiplicities. The two roots of each
// eigenvalue are symmetric about (2 - m) / 2.
std::vector<std::pair<double, int>> exponents(const Spectrum& spectrum, int m,
                                              double lo, double hi);

// Cumulative exponent count: minus the count over (delta, 0) for delta < 0,
// the count over [0, delta] for delta >= 0.
int count_N(const Spectrum& spectrum, int m, double delta);

// N(2) - b0 - m^2 - 2m + 1 + dim G: the number of excess deformation modes
// of the cone beyond the geometrically forced ones. Nonnegative for
// consistent inputs; zero means the cone is stable.
int stability_index(const ConeData& cone);

// ||Δ v - alpha (alpha + m - 2) v|| / ||v|| on the link discretization; near
// zero iff r^alpha v extends to a harmonic function on the cone.
double homogeneous_harmonic_residual(const LinkSpec& link, const Eigen::VectorXd& v,
                                     double alpha, int m);

// The triangulation backing mesh-based operations: tori get a periodic flat
// grid, spheres an icosphere refinement, meshes pass through.
TriMesh link_mesh(const LinkSpec& link, int resolution = 64);

// FEM matrices of a triangulated link (piecewise-linear elements).
void fem_matrices(const TriMesh& mesh, Eigen::SparseMatrix<double>& stiffness,
                  Eigen::SparseMatrix<double>& mass);

// Lattice of the flat torus link of the dilation-invariant torus cone: the
// plane {θ1 + θ2 + θ3 = 0} inherits the metric
//   (2/3)(dθ1^2 + dθ1 dθ2 + dθ2^2)
// from the unit embedding (e^{iθ1}, e^{iθ2}, e^{iθ3})/√3, whose period
// parallelogram is hexagonal with side 2π√(2/3).
TorusLattice clifford_torus_lattice();

// Preset cone data: the torus cone (dim G = 2) and the pair of 3-planes
// bounding the SO(3)-invariant family (dim G = 3, two-component link).
ConeData clifford_cone_data(int spectrum_count = 48);
ConeData plane_pair_cone_data(int spectrum_count = 48);

// Flat torus mesh from a lattice basis: n x n periodic grid.
TriMesh torus_mesh(const TorusLattice& lattice, int n);

// OFF-format triangle mesh I/O.
TriMesh load_off(const std::string& path);
void save_off(const TriMesh& mesh, const std::string& path);

}  // namespace slgeo

#include "slgeo/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

namespace slgeo {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;
constexpr double kPi = kTau / 2;

Spectrum group_values(std::vector<double> values, int count, double rel_tol) {
  std::sort(values.begin(), values.end());
  Spectrum spec;
  for (double v : values) {
    if (!spec.values.empty() &&
        v - spec.values.back() <= rel_tol * std::max(1.0, std::abs(v))) {
      ++spec.multiplicities.back();
    } else {
      if (spec.count() == count) break;
      spec.values.push_back(v);
      spec.multiplicities.push_back(1);
    }
  }
  return spec;
}

double binom(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  double v = 1;
  for (int k = 0; k < r; ++k) v = v * (n - k) / (k + 1);
  return v;
}

Spectrum sphere_spectrum(const SphereLink& link, int count) {
  if (link.dim < 1 || !(link.radius > 0))
    throw GeometryError("link_spectrum: invalid sphere");
  Spectrum spec;
  const double r2 = link.radius * link.radius;
  for (int k = 0; spec.count() < count; ++k) {
    spec.values.push_back(k * (k + link.dim - 1) / r2);
    const double mult = binom(k + link.dim, link.dim) - binom(k - 2 + link.dim, link.dim);
    spec.multiplicities.push_back(static_cast<int>(std::lround(mult)));
  }
  return spec;
}

Spectrum torus_spectrum(const TorusLattice& link, int count) {
  const double det = link.basis.determinant();
  if (std::abs(det) <= 1e-12 * link.basis.norm() * link.basis.norm())
    throw GeometryError("link_spectrum: degenerate lattice basis");
  const Eigen::Matrix2d dual = link.basis.transpose().inverse();
  const double sigma_min = dual.jacobiSvd().singularValues().minCoeff();

  double radius = 1.0 / link.basis.norm();
  for (int attempt = 0; attempt < 60; ++attempt) {
    std::vector<double> values;
    const int nmax = static_cast<int>(std::ceil(radius / sigma_min)) + 1;
    for (int i = -nmax; i <= nmax; ++i)
      for (int j = -nmax; j <= nmax; ++j) {
        const Eigen::Vector2d mu = dual * Eigen::Vector2d(i, j);
        if (mu.norm() <= radius) values.push_back(4 * kPi * kPi * mu.squaredNorm());
      }
    Spectrum spec = group_values(values, count + 1, 1e-6);
    // groups strictly inside the enumeration ball are complete
    if (spec.count() > count) {
      spec.values.resize(count);
      spec.multiplicities.resize(count);
      return spec;
    }
    radius *= 1.5;
  }
  throw GeometryError("link_spectrum: lattice enumeration did not close");
}

struct FemPair {
  Eigen::SparseMatrix<double> stiffness, mass;
};

FemPair assemble(const TriMesh& mesh) {
  if (mesh.nv() < 3 || mesh.nf() < 1) throw GeometryError("fem: empty mesh");
  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(size_t(mesh.nf()) * 9);
  mt.reserve(size_t(mesh.nf()) * 9);
  for (int f = 0; f < mesh.nf(); ++f) {
    Eigen::Matrix3d corners;
    if (!mesh.corner_pos.empty()) {
      corners = mesh.corner_pos[f];
    } else {
      corners.setZero();
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < mesh.vertices.cols() && d < 3; ++d)
          corners(d, c) = mesh.vertices(mesh.faces(f, c), d);
    }
    // edge vectors opposite each corner
    std::array<Eigen::Vector3d, 3> e;
    for (int c = 0; c < 3; ++c)
      e[c] = corners.col((c + 2) % 3) - corners.col((c + 1) % 3);
    const double area = 0.5 * e[0].cross(e[1]).norm();
    if (!(area > 0)) throw GeometryError("fem: degenerate triangle");
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        kt.emplace_back(mesh.faces(f, i), mesh.faces(f, j),
                        e[i].dot(e[j]) / (4.0 * area));
        mt.emplace_back(mesh.faces(f, i), mesh.faces(f, j),
                        (i == j ? area / 6.0 : area / 12.0));
      }
  }
  FemPair out;
  out.stiffness.resize(mesh.nv(), mesh.nv());
  out.mass.resize(mesh.nv(), mesh.nv());
  out.stiffness.setFromTriplets(kt.begin(), kt.end());
  out.mass.setFromTriplets(mt.begin(), mt.end());
  return out;
}

// Lowest eigenpairs of K x = λ M x by shift-inverted subspace iteration with
// Rayleigh-Ritz projection. Converged when the kept residuals, measured in
// the lumped-mass inverse norm, fall below 1e-9 relative to max(1, λ).
void lowest_pairs(const FemPair& fem, int want, Eigen::VectorXd& values,
                  Eigen::MatrixXd& vectors) {
  const int n = static_cast<int>(fem.stiffness.rows());
  const int p = std::min(n, want + std::max(8, want / 2));
  const double scale =
      fem.stiffness.diagonal().sum() / std::max(1e-300, fem.mass.diagonal().sum());
  const double sigma = 1e-3 * scale + 1e-12;
  Eigen::SparseMatrix<double> shifted = fem.stiffness + sigma * fem.mass;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success)
    throw GeometryError("link_spectrum: factorization failed");

  Eigen::VectorXd lumped_inv = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < fem.mass.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(fem.mass, k); it; ++it)
      lumped_inv(it.row()) += it.value();
  lumped_inv = lumped_inv.cwiseInverse();

  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) x(i, j) = gauss(rng);

  for (int it = 0; it < 400; ++it) {
    Eigen::MatrixXd y = solver.solve(fem.mass * x);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    y = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    const Eigen::MatrixXd a = y.transpose() * (fem.stiffness * y);
    const Eigen::MatrixXd b = y.transpose() * (fem.mass * y);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
        0.5 * (a + a.transpose()), 0.5 * (b + b.transpose()));
    if (ges.info() != Eigen::Success)
      throw GeometryError("link_spectrum: Ritz projection failed");
    x = y * ges.eigenvectors();
    const Eigen::VectorXd lam = ges.eigenvalues();

    if (it >= 3) {
      bool converged = true;
      for (int k = 0; k < want && converged; ++k) {
        Eigen::VectorXd xk = x.col(k);
        xk /= std::sqrt(xk.dot(fem.mass * xk));
        const Eigen::VectorXd r = fem.stiffness * xk - lam(k) * (fem.mass * xk);
        const double rn = std::sqrt(r.cwiseProduct(lumped_inv).dot(r));
        if (rn > 1e-9 * std::max(1.0, std::abs(lam(k)))) converged = false;
      }
      if (converged) {
        values = lam.head(want);
        vectors = x.leftCols(want);
        for (int k = 0; k < want; ++k)
          vectors.col(k) /= std::sqrt(vectors.col(k).dot(fem.mass * vectors.col(k)));
        return;
      }
    }
  }
  throw ConvergenceError("link_spectrum: eigen residual above tolerance");
}

Spectrum mesh_spectrum(const TriMesh& mesh, int count) {
  const FemPair fem = assemble(mesh);
  // grouped multiplicities are unknown a priori; oversample eigenvalues
  const int want = std::min(mesh.nv() - 1, std::min(std::max(count * 8, 24), 240));
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  lowest_pairs(fem, want, values, vectors);
  std::vector<double> vals(values.data(), values.data() + values.size());
  const double snap = 1e-7 * std::max(1.0, std::abs(vals.back()));
  for (double& v : vals)
    if (std::abs(v) <= snap) v = 0;
  Spectrum spec = group_values(vals, count, 1e-3);
  spec.validate();
  return spec;
}

TriMesh icosphere(double radius, int subdivisions) {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  std::vector<Eigen::Vector3d> verts = {
      {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (auto& v : verts) v.normalize();
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      verts.push_back((verts[a] + verts[b]).normalized());
      const int id = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces.swap(next);
  }
  TriMesh mesh;
  mesh.vertices.resize(verts.size(), 3);
  for (size_t i = 0; i < verts.size(); ++i) mesh.vertices.row(i) = radius * verts[i];
  mesh.faces.resize(faces.size(), 3);
  for (size_t f = 0; f < faces.size(); ++f)
    mesh.faces.row(f) << faces[f][0], faces[f][1], faces[f][2];
  return mesh;
}

}  // namespace

void Spectrum::validate() const {
  if (values.empty() || values.size() != multiplicities.size())
    throw ValidationError("spectrum: empty or mismatched");
  if (values[0] != 0) throw ValidationError("spectrum: lowest eigenvalue must be 0");
  for (size_t k = 0; k < values.size(); ++k) {
    if (multiplicities[k] < 1) throw ValidationError("spectrum: multiplicities must be >= 1");
    if (k > 0 && values[k] <= values[k - 1])
      throw ValidationError("spectrum: eigenvalues must increase strictly");
  }
}

Spectrum link_spectrum(const LinkSpec& link, int count) {
  if (count < 1) throw ValidationError("link_spectrum: count must be >= 1");
  if (std::holds_alternative<TorusLattice>(link))
    return torus_spectrum(std::get<TorusLattice>(link), count);
  if (std::holds_alternative<SphereLink>(link))
    return sphere_spectrum(std::get<SphereLink>(link), count);
  return mesh_spectrum(std::get<TriMesh>(link), count);
}

std::vector<std::pair<double, int>> exponents(const Spectrum& spectrum, int m,
                                              double lo, double hi) {
  if (m <= 2) throw InvalidDimensionError("exponents: requires m > 2");
  spectrum.validate();
  std::vector<std::pair<double, int>> out;
  for (int k = 0; k < spectrum.count(); ++k) {
    const double lambda = spectrum.values[k];
    const double disc = std::sqrt((m - 2.0) * (m - 2.0) + 4.0 * lambda);
    const double roots[2] = {0.5 * (-(m - 2.0) - disc), 0.5 * (-(m - 2.0) + disc)};
    for (double alpha : roots)
      if (alpha >= lo && alpha <= hi) out.emplace_back(alpha, spectrum.multiplicities[k]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int count_N(const Spectrum& spectrum, int m, double delta) {
  if (m <= 2) throw InvalidDimensionError("count_N: requires m > 2");
  spectrum.validate();
  const double tol = 1e-9;
  int total = 0;
  for (int k = 0; k < spectrum.count(); ++k) {
    const double lambda = spectrum.values[k];
    const double disc = std::sqrt((m - 2.0) * (m - 2.0) + 4.0 * lambda);
    const double roots[2] = {0.5 * (-(m - 2.0) - disc), 0.5 * (-(m - 2.0) + disc)};
    for (double alpha : roots) {
      if (delta >= 0) {
        if (alpha >= -tol && alpha <= delta + tol) total += spectrum.multiplicities[k];
      } else {
        if (alpha > delta + tol && alpha < -tol) total += spectrum.multiplicities[k];
      }
    }
  }
  return delta >= 0 ? total : -total;
}

int stability_index(const ConeData& cone) {
  if (cone.m <= 2) throw InvalidDimensionError("stability_index: requires m > 2");
  if (cone.b0_link < 1 || cone.dim_g < 0)
    throw ValidationError("stability_index: invalid cone data");
  cone.spectrum.validate();
  if (cone.spectrum.multiplicities[0] != cone.b0_link)
    throw InconsistencyError(
        "stability_index: zero-eigenvalue multiplicity must equal b0 of the link");
  const int n2 = count_N(cone.spectrum, cone.m, 2.0);
  const int s = n2 - cone.b0_link - cone.m * cone.m - 2 * cone.m + 1 + cone.dim_g;
  if (s < 0)
    throw InconsistencyError("stability_index: negative index signals bad inputs");
  return s;
}

double homogeneous_harmonic_residual(const LinkSpec& link, const Eigen::VectorXd& v,
                                     double alpha, int m) {
  const TriMesh mesh = link_mesh(link);
  if (v.size() != mesh.nv())
    throw ValidationError("homogeneous_harmonic_residual: field size mismatch");
  const FemPair fem = assemble(mesh);
  const double vnorm2 = v.dot(fem.mass * v);
  if (!(vnorm2 > 0))
    throw NormalizationError("homogeneous_harmonic_residual: zero field");
  const Eigen::VectorXd r = fem.stiffness * v - alpha * (alpha + m - 2.0) * (fem.mass * v);
  // lumped-mass inverse norm of the residual
  Eigen::VectorXd lumped = Eigen::VectorXd::Zero(mesh.nv());
  for (int k = 0; k < fem.mass.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(fem.mass, k); it; ++it)
      lumped(it.row()) += it.value();
  double acc = 0;
  for (int i = 0; i < r.size(); ++i) acc += r(i) * r(i) / lumped(i);
  return std::sqrt(acc) / std::sqrt(vnorm2);
}

TriMesh link_mesh(const LinkSpec& link, int resolution) {
  if (std::holds_alternative<TriMesh>(link)) return std::get<TriMesh>(link);
  if (std::holds_alternative<TorusLattice>(link))
    return torus_mesh(std::get<TorusLattice>(link), resolution);
  const auto& sphere = std::get<SphereLink>(link);
  if (sphere.dim != 2)
    throw GeometryError("link_mesh: only 2-dimensional sphere links are meshed");
  int subdivisions = 0;
  while ((20 << (2 * subdivisions)) < resolution * resolution && subdivisions < 7)
    ++subdivisions;
  return icosphere(sphere.radius, subdivisions);
}

void fem_matrices(const TriMesh& mesh, Eigen::SparseMatrix<double>& stiffness,
                  Eigen::SparseMatrix<double>& mass) {
  FemPair fem = assemble(mesh);
  stiffness = std::move(fem.stiffness);
  mass = std::move(fem.mass);
}

TorusLattice clifford_torus_lattice() {
  const double side = kTau * std::sqrt(2.0 / 3.0);
  TorusLattice lattice;
  lattice.basis << side, 0.5 * side, 0.0, 0.5 * std::sqrt(3.0) * side;
  return lattice;
}

ConeData clifford_cone_data(int spectrum_count) {
  ConeData cone;
  cone.m = 3;
  cone.b0_link = 1;
  cone.dim_g = 2;  // the diagonal torus of phase rotations preserving the cone
  cone.spectrum = link_spectrum(clifford_torus_lattice(), spectrum_count);
  return cone;
}

ConeData plane_pair_cone_data(int spectrum_count) {
  ConeData cone;
  cone.m = 3;
  cone.b0_link = 2;  // two disjoint unit 2-spheres
  cone.dim_g = 3;    // the rotation group acting diagonally
  const Spectrum one = link_spectrum(SphereLink{2, 1.0}, spectrum_count);
  cone.spectrum = one;
  for (auto& mult : cone.spectrum.multiplicities) mult *= 2;
  return cone;
}

TriMesh torus_mesh(const TorusLattice& lattice, int n) {
  if (n < 3) throw GeometryError("torus_mesh: resolution too small");
  TriMesh mesh;
  mesh.vertices.resize(n * n, 2);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      mesh.vertices.row(j * n + i) =
          (lattice.basis * Eigen::Vector2d(double(i) / n, double(j) / n)).transpose();
  mesh.faces.resize(2 * n * n, 3);
  mesh.corner_pos.resize(2 * n * n, Eigen::Matrix3d::Zero());
  auto vid = [&](int i, int j) { return (j % n) * n + (i % n); };
  auto pos = [&](int i, int j) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    p.head<2>() = lattice.basis * Eigen::Vector2d(double(i) / n, double(j) / n);
    return p;
  };
  int f = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      mesh.faces.row(f) << vid(i, j), vid(i + 1, j), vid(i + 1, j + 1);
      mesh.corner_pos[f].col(0) = pos(i, j);
      mesh.corner_pos[f].col(1) = pos(i + 1, j);
      mesh.corner_pos[f].col(2) = pos(i + 1, j + 1);
      ++f;
      mesh.faces.row(f) << vid(i, j), vid(i + 1, j + 1), vid(i, j + 1);
      mesh.corner_pos[f].col(0) = pos(i, j);
      mesh.corner_pos[f].col(1) = pos(i + 1, j + 1);
      mesh.corner_pos[f].col(2) = pos(i, j + 1);
      ++f;
    }
  return mesh;
}

TriMesh load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError("load_off: cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "OFF") throw GeometryError("load_off: not an OFF file");
  int nv = 0, nf = 0, ne = 0;
  in >> nv >> nf >> ne;
  if (nv < 3 || nf < 1) throw GeometryError("load_off: empty mesh");
  TriMesh mesh;
  mesh.vertices.resize(nv, 3);
  for (int i = 0; i < nv; ++i)
    in >> mesh.vertices(i, 0) >> mesh.vertices(i, 1) >> mesh.vertices(i, 2);
  mesh.faces.resize(nf, 3);
  for (int f = 0; f < nf; ++f) {
    int deg = 0;
    in >> deg;
    if (deg != 3) throw GeometryError("load_off: only triangle faces are supported");
    in >> mesh.faces(f, 0) >> mesh.faces(f, 1) >> mesh.faces(f, 2);
  }
  if (!in) throw GeometryError("load_off: truncated file");
  return mesh;
}

void save_off(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GeometryError("save_off: cannot open " + path);
  out << "OFF\n" << mesh.nv() << " " << mesh.nf() << " 0\n";
  for (int i = 0; i < mesh.nv(); ++i) {
    for (int d = 0; d < 3; ++d)
      out << (d < mesh.vertices.cols() ? mesh.vertices(i, d) : 0.0)
          << (d == 2 ? '\n' : ' ');
  }
  for (int f = 0; f < mesh.nf(); ++f)
    out << "3 " << mesh.faces(f, 0) << " " << mesh.faces(f, 1) << " "
        << mesh.faces(f, 2) << "\n";
}

}  // namespace slgeo

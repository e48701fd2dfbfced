#include "slgeo/u1pde.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <queue>

namespace slgeo {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

long long lattice_key(int i, int j) {
  return (static_cast<long long>(i) << 32) ^ (static_cast<unsigned int>(j));
}

enum Dir { kW = 0, kE = 1, kS = 2, kN = 3 };

struct FirstDeriv {
  double cw, ce, cc;  // low-side, high-side, center coefficients
};

FirstDeriv first_deriv(double hw, double he) {
  return {-he / (hw * (hw + he)), hw / (he * (hw + he)), (he - hw) / (hw * he)};
}

struct SecondDeriv {
  double cw, ce, cc;
};

SecondDeriv second_deriv(double hw, double he) {
  const double s = 2.0 / (hw + he);
  return {s / hw, s / he, -s / hw - s / he};
}

}  // namespace

Disk::Disk(double radius) : radius_(radius) {
  if (!(radius > 0)) throw ValidationError("Disk: radius must be positive");
}

double Disk::implicit(double x, double y) const {
  return x * x + y * y - radius_ * radius_;
}

Eigen::Vector2d Disk::boundary_point(double theta) const {
  return {radius_ * std::cos(theta), radius_ * std::sin(theta)};
}

EllipseShape::EllipseShape(double rx, double ry, double cx) : rx_(rx), ry_(ry), cx_(cx) {
  if (!(rx > 0) || !(ry > 0)) throw ValidationError("EllipseShape: radii must be positive");
}

double EllipseShape::implicit(double x, double y) const {
  const double u = (x - cx_) / rx_, v = y / ry_;
  return u * u + v * v - 1.0;
}

Eigen::Vector2d EllipseShape::boundary_point(double theta) const {
  return {cx_ + rx_ * std::cos(theta), ry_ * std::sin(theta)};
}

int DomainMesh::node_at(int i, int j) const {
  auto it = node_index.find(lattice_key(i, j));
  return it == node_index.end() ? -1 : it->second;
}

int DomainMesh::nearest_node(double x, double y) const {
  const int ci = static_cast<int>(std::lround(x / h));
  const int cj = static_cast<int>(std::lround(y / h));
  for (int ring = 0; ring <= 6; ++ring)
    for (int di = -ring; di <= ring; ++di)
      for (int dj = -ring; dj <= ring; ++dj) {
        if (std::max(std::abs(di), std::abs(dj)) != ring) continue;
        const int id = node_at(ci + di, cj + dj);
        if (id >= 0) return id;
      }
  // distant query: fall back to a scan
  int best = -1;
  double bd = std::numeric_limits<double>::max();
  for (size_t k = 0; k < nodes.size(); ++k) {
    const double d = (nodes[k] - Eigen::Vector2d(x, y)).squaredNorm();
    if (d < bd) {
      bd = d;
      best = static_cast<int>(k);
    }
  }
  return best;
}

std::shared_ptr<const DomainMesh> build_mesh(const DomainShape& shape, double h,
                                             int boundary_samples) {
  if (!(h > 0)) throw ValidationError("build_mesh: spacing must be positive");
  auto mesh = std::make_shared<DomainMesh>();
  mesh->h = h;

  // boundary polyline, its symmetry and strict convexity
  mesh->boundary.resize(boundary_samples);
  mesh->normals.resize(boundary_samples);
  for (int k = 0; k < boundary_samples; ++k)
    mesh->boundary[k] = shape.boundary_point(kTau * k / boundary_samples);
  const double scale = shape.bound_radius();
  for (int k = 0; k < boundary_samples; ++k) {
    const auto& p = mesh->boundary[k];
    if (std::abs(shape.implicit(p(0), -p(1))) > 1e-9 * std::max(1.0, scale * scale))
      throw DomainError("build_mesh: domain must be symmetric under y -> -y");
    const double d = 1e-6 * scale;
    Eigen::Vector2d g(
        (shape.implicit(p(0) + d, p(1)) - shape.implicit(p(0) - d, p(1))) / (2 * d),
        (shape.implicit(p(0), p(1) + d) - shape.implicit(p(0), p(1) - d)) / (2 * d));
    mesh->normals[k] = g.normalized();
  }
  double kappa_min = std::numeric_limits<double>::max();
  for (int k = 0; k < boundary_samples; ++k) {
    const auto& p0 = mesh->boundary[(k + boundary_samples - 1) % boundary_samples];
    const auto& p1 = mesh->boundary[k];
    const auto& p2 = mesh->boundary[(k + 1) % boundary_samples];
    const Eigen::Vector2d e0 = p1 - p0, e1 = p2 - p1;
    const double cross = e0(0) * e1(1) - e0(1) * e1(0);
    if (cross <= 0) throw DomainError("build_mesh: boundary is not strictly convex");
    const double turn = std::asin(std::clamp(cross / (e0.norm() * e1.norm()), -1.0, 1.0));
    kappa_min = std::min(kappa_min, turn / (0.5 * (e0.norm() + e1.norm())));
  }
  if (kappa_min < 0.05 / scale)
    throw DomainError("build_mesh: boundary curvature is not bounded below");

  // interior lattice nodes
  const int irange = static_cast<int>(std::floor(scale / h)) + 2;
  for (int j = -irange; j <= irange; ++j)
    for (int i = -irange; i <= irange; ++i)
      if (shape.implicit(i * h, j * h) < 0) {
        mesh->node_index.emplace(lattice_key(i, j),
                                 static_cast<int>(mesh->nodes.size()));
        mesh->nodes.emplace_back(i * h, j * h);
        mesh->lattice.push_back({i, j});
      }
  if (mesh->nodes.empty()) throw DomainError("build_mesh: spacing too coarse");

  // stencil arms; where the neighbor is outside, bisect for the cut point
  const int step_i[4] = {-1, 1, 0, 0};
  const int step_j[4] = {0, 0, -1, 1};
  mesh->arms.resize(mesh->nodes.size());
  for (size_t n = 0; n < mesh->nodes.size(); ++n) {
    const auto [i, j] = mesh->lattice[n];
    for (int d = 0; d < 4; ++d) {
      DomainMesh::Arm arm;
      arm.nbr = mesh->node_at(i + step_i[d], j + step_j[d]);
      if (arm.nbr >= 0) {
        arm.len = h;
      } else {
        double lo = 0, hi = h;
        const double x0 = i * h, y0 = j * h;
        const double dx = step_i[d] * 1.0, dy = step_j[d] * 1.0;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (shape.implicit(x0 + dx * mid, y0 + dy * mid) < 0)
            lo = mid;
          else
            hi = mid;
        }
        arm.len = std::max(0.5 * (lo + hi), 1e-9 * h);
        arm.bx = x0 + dx * arm.len;
        arm.by = y0 + dy * arm.len;
      }
      mesh->arms[n][d] = arm;
    }
  }
  return mesh;
}

namespace {

// Values entering the stencil: interior unknowns or Dirichlet data.
struct ArmValue {
  double value;
  int column;  // interior column id, or -1 for boundary data
};

ArmValue arm_value(const PotentialField& field, int node, int dir) {
  const auto& arm = field.mesh->arms[node][dir];
  if (arm.nbr >= 0) return {field.f(arm.nbr), arm.nbr};
  return {field.arm_phi[node][dir], -1};
}

struct NodeOps {
  double dx, lxx, lyy;
  FirstDeriv fdx;
  SecondDeriv sxx, syy;
  ArmValue w, e, s, n;
};

NodeOps node_ops(const PotentialField& field, int node) {
  NodeOps ops;
  const auto& arms = field.mesh->arms[node];
  ops.w = arm_value(field, node, kW);
  ops.e = arm_value(field, node, kE);
  ops.s = arm_value(field, node, kS);
  ops.n = arm_value(field, node, kN);
  const double fc = field.f(node);
  ops.fdx = first_deriv(arms[kW].len, arms[kE].len);
  ops.sxx = second_deriv(arms[kW].len, arms[kE].len);
  ops.syy = second_deriv(arms[kS].len, arms[kN].len);
  ops.dx = ops.fdx.cw * ops.w.value + ops.fdx.ce * ops.e.value + ops.fdx.cc * fc;
  ops.lxx = ops.sxx.cw * ops.w.value + ops.sxx.ce * ops.e.value + ops.sxx.cc * fc;
  ops.lyy = ops.syy.cw * ops.s.value + ops.syy.ce * ops.n.value + ops.syy.cc * fc;
  return ops;
}

Eigen::VectorXd nonlinear_residual(const PotentialField& field, double a) {
  const int n = static_cast<int>(field.mesh->nodes.size());
  Eigen::VectorXd r(n);
  for (int k = 0; k < n; ++k) {
    const NodeOps ops = node_ops(field, k);
    const double y = field.mesh->nodes[k](1);
    const double q = ops.dx * ops.dx + y * y + a * a;
    r(k) = ops.lxx / std::sqrt(q) + 2.0 * ops.lyy;
  }
  return r;
}

Eigen::SparseMatrix<double> nonlinear_jacobian(const PotentialField& field, double a) {
  const int n = static_cast<int>(field.mesh->nodes.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(size_t(n) * 6);
  for (int k = 0; k < n; ++k) {
    const NodeOps ops = node_ops(field, k);
    const double y = field.mesh->nodes[k](1);
    const double q = ops.dx * ops.dx + y * y + a * a;
    const double w = 1.0 / std::sqrt(q);
    const double dcoef = -ops.dx * ops.lxx * w / q;  // d/d(Dx) of q^{-1/2} Lxx
    auto add = [&](int col, double v) {
      if (col >= 0 && v != 0) trip.emplace_back(k, col, v);
    };
    add(k, w * ops.sxx.cc + 2.0 * ops.syy.cc + dcoef * ops.fdx.cc);
    add(ops.w.column, w * ops.sxx.cw + dcoef * ops.fdx.cw);
    add(ops.e.column, w * ops.sxx.ce + dcoef * ops.fdx.ce);
    add(ops.s.column, 2.0 * ops.syy.cw);
    add(ops.n.column, 2.0 * ops.syy.ce);
  }
  Eigen::SparseMatrix<double> jac(n, n);
  jac.setFromTriplets(trip.begin(), trip.end());
  return jac;
}

// Linear Dirichlet solve of Lxx + Lyy = 0: the Newton starting guess.
Eigen::VectorXd harmonic_extension(const PotentialField& field) {
  const int n = static_cast<int>(field.mesh->nodes.size());
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    const auto& arms = field.mesh->arms[k];
    const SecondDeriv sxx = second_deriv(arms[kW].len, arms[kE].len);
    const SecondDeriv syy = second_deriv(arms[kS].len, arms[kN].len);
    trip.emplace_back(k, k, sxx.cc + syy.cc);
    const double cs[4] = {sxx.cw, sxx.ce, syy.cw, syy.ce};
    for (int d = 0; d < 4; ++d) {
      if (arms[d].nbr >= 0)
        trip.emplace_back(k, arms[d].nbr, cs[d]);
      else
        rhs(k) -= cs[d] * field.arm_phi[k][d];
    }
  }
  Eigen::SparseMatrix<double> lap(n, n);
  lap.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(lap);
  if (lu.info() != Eigen::Success)
    throw ConvergenceError("solve_dirichlet: harmonic extension failed");
  return lu.solve(rhs);
}

void newton_solve(PotentialField& field, double a, double tol, int max_newton) {
  const int n = static_cast<int>(field.mesh->nodes.size());
  Eigen::VectorXd r = nonlinear_residual(field, a);
  double merit = r.norm();
  int it = 0;
  for (; it < max_newton; ++it) {
    if (r.lpNorm<Eigen::Infinity>() <= tol) break;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(nonlinear_jacobian(field, a));
    if (lu.info() != Eigen::Success)
      throw ConvergenceError("solve_dirichlet: singular Newton system");
    const Eigen::VectorXd delta = lu.solve(-r);
    double lambda = 1.0;
    bool accepted = false;
    const Eigen::VectorXd f0 = field.f;
    for (int half = 0; half < 25; ++half) {
      field.f = f0 + lambda * delta;
      const Eigen::VectorXd rn = nonlinear_residual(field, a);
      const double mn = rn.norm();
      if (mn <= (1.0 - 1e-4 * lambda) * merit) {
        r = rn;
        merit = mn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      field.f = f0;
      throw ConvergenceError("solve_dirichlet: Newton line search stalled");
    }
  }
  field.residual_inf = r.lpNorm<Eigen::Infinity>();
  field.newton_iters += it;
  if (field.residual_inf > tol)
    throw ConvergenceError("solve_dirichlet: Newton did not reach tolerance");
  (void)n;
}

}  // namespace

double potential_residual(const PotentialField& field) {
  return nonlinear_residual(field, field.a).lpNorm<Eigen::Infinity>();
}

PotentialField solve_dirichlet(std::shared_ptr<const DomainMesh> mesh,
                               const BoundaryFn& phi, double a,
                               const SolveOptions& opt) {
  if (!mesh) throw ValidationError("solve_dirichlet: missing mesh");
  PotentialField field;
  field.mesh = std::move(mesh);
  field.a = a;
  const int n = static_cast<int>(field.mesh->nodes.size());
  field.arm_phi.assign(n, {0, 0, 0, 0});
  for (int k = 0; k < n; ++k)
    for (int d = 0; d < 4; ++d) {
      const auto& arm = field.mesh->arms[k][d];
      if (arm.nbr < 0) field.arm_phi[k][d] = phi(arm.bx, arm.by);
    }
  field.boundary_phi.resize(field.mesh->boundary.size());
  for (size_t k = 0; k < field.mesh->boundary.size(); ++k)
    field.boundary_phi(k) = phi(field.mesh->boundary[k](0), field.mesh->boundary[k](1));

  auto tol_for = [&](double aa) {
    return opt.tol > 0 ? opt.tol : (std::abs(aa) >= 1e-2 ? 1e-8 : 1e-6);
  };

  if (a != 0) {
    field.f = opt.initial ? *opt.initial : harmonic_extension(field);
    newton_solve(field, a, tol_for(a), opt.max_newton);
    return field;
  }

  // a = 0: continuation a_k = 2^{-k}, seeded from the a = 1 solution, until
  // successive solutions are Cauchy in the sup-norm.
  field.f = opt.initial ? *opt.initial : harmonic_extension(field);
  newton_solve(field, 1.0, tol_for(1.0), opt.max_newton);
  Eigen::VectorXd prev = field.f;
  for (int k = 1; k <= opt.max_continuation; ++k) {
    const double ak = std::pow(2.0, -k);
    newton_solve(field, ak, tol_for(ak), opt.max_newton);
    const double gap = (field.f - prev).lpNorm<Eigen::Infinity>();
    field.continuation_tail.push_back(gap);
    prev = field.f;
    if (gap < opt.continuation_gap) return field;
  }
  throw ConvergenceError("solve_dirichlet: a -> 0 continuation did not settle");
}

UVField potential_to_uv(const PotentialField& field) {
  UVField uv;
  uv.mesh = field.mesh;
  uv.a = field.a;
  const int n = static_cast<int>(field.mesh->nodes.size());
  uv.u.resize(n);
  uv.v.resize(n);
  for (int k = 0; k < n; ++k) {
    const auto& arms = field.mesh->arms[k];
    const ArmValue w = arm_value(field, k, kW), e = arm_value(field, k, kE);
    const ArmValue s = arm_value(field, k, kS), nn = arm_value(field, k, kN);
    const FirstDeriv dx = first_deriv(arms[kW].len, arms[kE].len);
    const FirstDeriv dy = first_deriv(arms[kS].len, arms[kN].len);
    uv.v(k) = dx.cw * w.value + dx.ce * e.value + dx.cc * field.f(k);
    uv.u(k) = dy.cw * s.value + dy.ce * nn.value + dy.cc * field.f(k);
  }
  return uv;
}

CRResidual cr_residual(const UVField& field) {
  const auto& mesh = *field.mesh;
  const int n = static_cast<int>(mesh.nodes.size());
  CRResidual out;
  out.r1 = Eigen::VectorXd::Zero(n);
  out.r2 = Eigen::VectorXd::Zero(n);
  out.interior.assign(n, 0);
  out.exceptional.assign(n, 0);
  const double h = mesh.h;
  double vscale = 0;
  for (int k = 0; k < n; ++k) vscale = std::max(vscale, std::abs(field.v(k)));
  for (int k = 0; k < n; ++k) {
    const auto& arms = mesh.arms[k];
    if (arms[kW].nbr < 0 || arms[kE].nbr < 0 || arms[kS].nbr < 0 || arms[kN].nbr < 0)
      continue;
    out.interior[k] = 1;
    const double ux = (field.u(arms[kE].nbr) - field.u(arms[kW].nbr)) / (2 * h);
    const double uy = (field.u(arms[kN].nbr) - field.u(arms[kS].nbr)) / (2 * h);
    const double vx = (field.v(arms[kE].nbr) - field.v(arms[kW].nbr)) / (2 * h);
    const double vy = (field.v(arms[kN].nbr) - field.v(arms[kS].nbr)) / (2 * h);
    const double y = mesh.nodes[k](1);
    const double v = field.v(k);
    out.r1(k) = ux - vy;
    out.r2(k) = vx + 2.0 * std::sqrt(v * v + y * y + field.a * field.a) * uy;
    if (field.a == 0 && std::abs(y) <= 1.5 * h && std::abs(v) <= 5.0 * h * std::max(1.0, vscale))
      out.exceptional[k] = 1;
  }
  return out;
}

GridInterp::GridInterp(const DomainMesh& mesh, const Eigen::VectorXd& values)
    : mesh_(mesh), values_(values) {}

double GridInterp::operator()(double x, double y) const {
  const double h = mesh_.h;
  const int i = static_cast<int>(std::floor(x / h));
  const int j = static_cast<int>(std::floor(y / h));
  const int id00 = mesh_.node_at(i, j), id10 = mesh_.node_at(i + 1, j);
  const int id01 = mesh_.node_at(i, j + 1), id11 = mesh_.node_at(i + 1, j + 1);
  if (id00 >= 0 && id10 >= 0 && id01 >= 0 && id11 >= 0) {
    const double s = x / h - i, t = y / h - j;
    return (1 - s) * (1 - t) * values_(id00) + s * (1 - t) * values_(id10) +
           (1 - s) * t * values_(id01) + s * t * values_(id11);
  }
  const int near = mesh_.nearest_node(x, y);
  if (near < 0) throw GeometryError("GridInterp: empty mesh");
  return values_(near);
}

namespace {

// Winding number of the interpolated field (fu - cu, fv - cv) along the
// circle of the given radius; the sample count doubles until angle steps are
// resolved.
int circuit_winding(const GridInterp& fu, const GridInterp& fv, double cx, double cy,
                    double radius, double cu, double cv, bool& reliable) {
  int samples = 128;
  for (int attempt = 0; attempt < 4; ++attempt) {
    double total = 0;
    double prev = 0;
    bool ok = true;
    for (int s = 0; s <= samples; ++s) {
      const double th = kTau * s / samples;
      const double px = cx + radius * std::cos(th), py = cy + radius * std::sin(th);
      const double a = fu(px, py) - cu, b = fv(px, py) - cv;
      if (a * a + b * b == 0) {
        ok = false;
        break;
      }
      const double ang = std::atan2(b, a);
      if (s > 0) {
        double d = ang - prev;
        while (d > kTau / 2) d -= kTau;
        while (d < -kTau / 2) d += kTau;
        if (std::abs(d) > kTau / 4) ok = false;  // under-resolved step
        total += d;
      }
      prev = ang;
    }
    if (ok) {
      reliable = true;
      return static_cast<int>(std::lround(total / kTau));
    }
    samples *= 2;
  }
  reliable = false;
  return 0;
}

bool circle_inside(const DomainMesh& mesh, double cx, double cy, double radius) {
  for (int s = 0; s < 32; ++s) {
    const double th = kTau * s / 32;
    const double px = cx + (radius + mesh.h) * std::cos(th);
    const double py = cy + (radius + mesh.h) * std::sin(th);
    const int i = static_cast<int>(std::floor(px / mesh.h));
    const int j = static_cast<int>(std::floor(py / mesh.h));
    if (mesh.node_at(i, j) < 0 || mesh.node_at(i + 1, j) < 0 ||
        mesh.node_at(i, j + 1) < 0 || mesh.node_at(i + 1, j + 1) < 0)
      return false;
  }
  return true;
}

}  // namespace

SingularScan detect_singular_points(const UVField& field, double axis_tol) {
  SingularScan scan;
  if (field.a != 0) return scan;  // nonsingular: the lift avoids the axis

  const auto& mesh = *field.mesh;
  std::vector<std::pair<int, int>> axis;  // (lattice i, node id)
  for (size_t k = 0; k < mesh.lattice.size(); ++k)
    if (mesh.lattice[k][1] == 0) axis.emplace_back(mesh.lattice[k][0], static_cast<int>(k));
  std::sort(axis.begin(), axis.end());
  if (axis.size() < 2) return scan;

  double vmax_axis = 0;
  for (const auto& [i, id] : axis) vmax_axis = std::max(vmax_axis, std::abs(field.v(id)));
  if (vmax_axis <= axis_tol) {
    scan.whole_axis = true;
    return scan;
  }

  const GridInterp fu(mesh, field.u), fv(mesh, field.v);
  const double h = mesh.h;
  auto add_point = [&](double x) {
    if (!scan.points.empty() && std::abs(scan.points.back().x - x) < h) return;
    SingularPoint p;
    p.x = x;
    const double cu = fu(x, 0.0);
    double radius = 3 * h;
    bool reliable = false;
    int wind = 0;
    while (radius >= 1.2 * h) {
      if (circle_inside(mesh, x, 0.0, radius)) {
        wind = circuit_winding(fu, fv, x, 0.0, radius, cu, 0.0, reliable);
        if (reliable) break;
      }
      radius *= 0.7;
    }
    p.multiplicity = std::max(1, std::abs(wind));
    const double delta = 2 * h;
    const double vp = fv(x, delta), vm = fv(x, -delta);
    p.type_tag = std::abs(vp + vm) <= std::abs(vp - vm) ? 1 : 2;
    scan.points.push_back(p);
  };

  for (size_t k = 0; k + 1 < axis.size(); ++k) {
    if (axis[k + 1].first != axis[k].first + 1) continue;  // gap in the axis row
    const double v0 = field.v(axis[k].second), v1 = field.v(axis[k + 1].second);
    const double x0 = axis[k].first * h, x1 = axis[k + 1].first * h;
    if (std::abs(v0) <= axis_tol) {
      add_point(x0);
    } else if (v0 * v1 < 0) {
      add_point(x0 + (x1 - x0) * v0 / (v0 - v1));
    }
  }
  const auto& last = axis.back();
  if (std::abs(field.v(last.second)) <= axis_tol) add_point(last.first * h);
  return scan;
}

std::vector<ZeroPoint> count_zeros(const UVField& f1, const UVField& f2) {
  if (f1.mesh != f2.mesh)
    throw ValidationError("count_zeros: fields must share a mesh");
  if (f1.a != f2.a) throw ValidationError("count_zeros: fields must share a");
  const auto& mesh = *f1.mesh;
  const Eigen::VectorXd du = f1.u - f2.u, dv = f1.v - f2.v;
  const double scale = std::max({f1.u.lpNorm<Eigen::Infinity>(),
                                 f1.v.lpNorm<Eigen::Infinity>(), 1.0});
  if (std::max(du.lpNorm<Eigen::Infinity>(), dv.lpNorm<Eigen::Infinity>()) <=
      1e-13 * scale)
    throw DegenerateComparisonError("count_zeros: fields coincide");

  // candidate cells: both components change sign across the 2 x 2 corners
  struct Cell {
    int i, j;
  };
  std::vector<Cell> cand;
  for (size_t k = 0; k < mesh.lattice.size(); ++k) {
    const auto [i, j] = mesh.lattice[k];
    const int c00 = static_cast<int>(k);
    const int c10 = mesh.node_at(i + 1, j), c01 = mesh.node_at(i, j + 1);
    const int c11 = mesh.node_at(i + 1, j + 1);
    if (c10 < 0 || c01 < 0 || c11 < 0) continue;
    auto spread = [&](const Eigen::VectorXd& g) {
      const double a = g(c00), b = g(c10), c = g(c01), d = g(c11);
      return std::min({a, b, c, d}) <= 0 && std::max({a, b, c, d}) >= 0;
    };
    if (spread(du) && spread(dv)) cand.push_back({i, j});
  }
  if (cand.empty()) return {};

  // cluster adjacent candidate cells
  std::vector<int> label(cand.size(), -1);
  auto adjacent = [&](const Cell& a, const Cell& b) {
    return std::abs(a.i - b.i) <= 1 && std::abs(a.j - b.j) <= 1;
  };
  int nlabels = 0;
  for (size_t s = 0; s < cand.size(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = nlabels;
    std::queue<size_t> bfs;
    bfs.push(s);
    while (!bfs.empty()) {
      const size_t cur = bfs.front();
      bfs.pop();
      for (size_t t = 0; t < cand.size(); ++t)
        if (label[t] < 0 && adjacent(cand[cur], cand[t])) {
          label[t] = nlabels;
          bfs.push(t);
        }
    }
    ++nlabels;
  }

  const GridInterp iu(mesh, du), iv(mesh, dv);
  const double h = mesh.h;
  std::vector<ZeroPoint> zeros;
  for (int l = 0; l < nlabels; ++l) {
    double cx = 0, cy = 0, lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    int cnt = 0;
    for (size_t s = 0; s < cand.size(); ++s)
      if (label[s] == l) {
        const double x = (cand[s].i + 0.5) * h, y = (cand[s].j + 0.5) * h;
        cx += x;
        cy += y;
        lo_x = std::min(lo_x, x);
        hi_x = std::max(hi_x, x);
        lo_y = std::min(lo_y, y);
        hi_y = std::max(hi_y, y);
        ++cnt;
      }
    cx /= cnt;
    cy /= cnt;
    const double extent = 0.5 * std::hypot(hi_x - lo_x, hi_y - lo_y);
    const double radius = std::max(3 * h, extent + 2 * h);
    if (!circle_inside(mesh, cx, cy, radius)) continue;  // interior zeros only
    bool reliable = false;
    const int wind = circuit_winding(iu, iv, cx, cy, radius, 0.0, 0.0, reliable);
    if (reliable && wind != 0) zeros.push_back({cx, cy, wind});
  }
  return zeros;
}

ComplexPoint lift_point(double a, double x, double y, double u, double v, double psi) {
  const Complex w(v, y);
  const double rr = std::sqrt(a * a + std::norm(w));
  ComplexPoint z(3);
  z(2) = Complex(x, u);
  if (a >= 0) {
    const double s1 = a + rr;  // |z_1|^2; positive unless a = 0 and w = 0
    z(0) = std::sqrt(s1) * std::polar(1.0, psi);
    z(1) = s1 > 0 ? w / z(0) : Complex(0, 0);
  } else {
    const double s2 = -a + rr;  // |z_2|^2 >= -2a > 0
    z(1) = std::sqrt(s2) * std::polar(1.0, -psi);
    z(0) = w / z(1);
  }
  return z;
}

SampleCloud lift_to_sl3(const UVField& field, const LiftOptions& opt) {
  const auto& mesh = *field.mesh;
  const double a = field.a;
  SampleCloud cloud;
  const int stride = std::max(1, opt.stride);

  // arm-aware first derivatives of u and v where the full stencil is interior
  const int n = static_cast<int>(mesh.nodes.size());
  Eigen::VectorXd ux(n), uy(n), vx(n), vy(n);
  std::vector<uint8_t> has_deriv(n, 0);
  for (int k = 0; k < n; ++k) {
    const auto& arms = mesh.arms[k];
    if (arms[kW].nbr < 0 || arms[kE].nbr < 0 || arms[kS].nbr < 0 || arms[kN].nbr < 0)
      continue;
    has_deriv[k] = 1;
    ux(k) = (field.u(arms[kE].nbr) - field.u(arms[kW].nbr)) / (2 * mesh.h);
    uy(k) = (field.u(arms[kN].nbr) - field.u(arms[kS].nbr)) / (2 * mesh.h);
    vx(k) = (field.v(arms[kE].nbr) - field.v(arms[kW].nbr)) / (2 * mesh.h);
    vy(k) = (field.v(arms[kN].nbr) - field.v(arms[kS].nbr)) / (2 * mesh.h);
  }

  for (int k = 0; k < n; k += stride) {
    const double x = mesh.nodes[k](0), y = mesh.nodes[k](1);
    const double u = field.u(k), v = field.v(k);
    const Complex w(v, y);
    const double rr = std::sqrt(a * a + std::norm(w));
    const bool singular = a == 0 && rr == 0;
    for (int p = 0; p < opt.n_psi; ++p) {
      const double psi = kTau * p / opt.n_psi;
      if (singular && p > 0) break;  // the singular point: one sample
      ComplexPoint z = lift_point(a, x, y, u, v, psi);
      cloud.points.push_back(z);

      if (!opt.frames || !has_deriv[k] || rr + a <= 1e-12 || rr - a <= 1e-12) continue;
      // chart tangents: d/dx, d/dy analytic in the field data, d/dpsi exact
      const double sx = (v * vx(k)) / rr;  // derivative of |z_1|^2 and |z_2|^2
      const double sy = (v * vy(k) + y) / rr;
      const Complex wx(vx(k), 0), wy(vy(k), 1);
      TangentFrame f;
      f.base = z;
      f.vectors.resize(3, 3);
      if (a >= 0) {
        const double s1 = a + rr;
        const Complex e1 = std::polar(1.0, psi);
        const Complex dz1_dx = sx / (2.0 * std::sqrt(s1)) * e1;
        const Complex dz1_dy = sy / (2.0 * std::sqrt(s1)) * e1;
        f.vectors.col(0) << dz1_dx, (wx - w * sx / (2.0 * s1)) / z(0), Complex(1, ux(k));
        f.vectors.col(1) << dz1_dy, (wy - w * sy / (2.0 * s1)) / z(0), Complex(0, uy(k));
      } else {
        const double s2 = -a + rr;
        const Complex e2 = std::polar(1.0, -psi);
        const Complex dz2_dx = sx / (2.0 * std::sqrt(s2)) * e2;
        const Complex dz2_dy = sy / (2.0 * std::sqrt(s2)) * e2;
        f.vectors.col(0) << (wx - w * sx / (2.0 * s2)) / z(1), dz2_dx, Complex(1, ux(k));
        f.vectors.col(1) << (wy - w * sy / (2.0 * s2)) / z(1), dz2_dy, Complex(0, uy(k));
      }
      f.vectors.col(2) << Complex(0, 1) * z(0), Complex(0, -1) * z(1), Complex(0, 0);
      cloud.frames.push_back(std::move(f));
    }
  }
  return cloud;
}

void hl_uv(double t, double x, double y, double& u, double& v) {
  const double d = x * x - t * t;
  const double rho = 0.5 * (d + std::sqrt(d * d + 4.0 * (y * y + x * x * t * t)));
  const double root = std::sqrt(rho + t * t);
  v = x * root;
  u = root > 0 ? -y / root : 0.0;
}

UVField hl_uv_field(std::shared_ptr<const DomainMesh> mesh, double t) {
  UVField field;
  field.mesh = std::move(mesh);
  field.a = 0.5 * t * t;
  const int n = static_cast<int>(field.mesh->nodes.size());
  field.u.resize(n);
  field.v.resize(n);
  for (int k = 0; k < n; ++k)
    hl_uv(t, field.mesh->nodes[k](0), field.mesh->nodes[k](1), field.u(k), field.v(k));
  return field;
}

}  // namespace slgeo

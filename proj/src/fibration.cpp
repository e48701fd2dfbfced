#include "slgeo/fibration.hpp"

#include <map>

namespace slgeo {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

}  // namespace

bool validate_extrema(const DomainMesh& mesh, const BoundaryFn& diff) {
  const int n = static_cast<int>(mesh.boundary.size());
  if (n < 4) throw GeometryError("validate_extrema: boundary polyline too short");
  std::vector<double> vals(n);
  double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
  for (int k = 0; k < n; ++k) {
    vals[k] = diff(mesh.boundary[k](0), mesh.boundary[k](1));
    lo = std::min(lo, vals[k]);
    hi = std::max(hi, vals[k]);
  }
  const double tol = 1e-12 * std::max(1.0, hi - lo);
  // walk the closed polyline and count sign flips of the discrete derivative,
  // skipping plateau steps
  int maxima = 0, minima = 0;
  int prev_sign = 0;
  int first_sign = 0;
  for (int k = 0; k < n; ++k) {
    const double d = vals[(k + 1) % n] - vals[k];
    const int sign = d > tol ? 1 : (d < -tol ? -1 : 0);
    if (sign == 0) continue;
    if (prev_sign != 0 && sign != prev_sign) {
      if (prev_sign > 0)
        ++maxima;
      else
        ++minima;
    }
    if (first_sign == 0) first_sign = sign;
    prev_sign = sign;
  }
  if (prev_sign != 0 && first_sign != 0 && prev_sign != first_sign) {
    if (prev_sign > 0)
      ++maxima;
    else
      ++minima;
  }
  return maxima == 1 && minima == 1;
}

FiberBuild build_fiber(const BoundaryFamily& family, const FiberKey& key,
                       const LiftOptions& lift, const SolveOptions& solve) {
  if (!family.mesh) throw ValidationError("build_fiber: family has no mesh");
  if (!family.box.contains(key)) throw ValidationError("build_fiber: key outside the box");
  FiberBuild out;
  out.key = key;
  out.potential = solve_dirichlet(family.mesh, family.boundary_fn(key), key.a, solve);
  out.uv = potential_to_uv(out.potential);
  out.cloud = lift_to_sl3(out.uv, lift);
  return out;
}

std::pair<double, Complex> explicit_fibration(const ComplexPoint& z) {
  if (z.size() != 3) throw InvalidDimensionError("explicit_fibration: point must lie in C^3");
  const double a = 0.5 * (std::norm(z(0)) - std::norm(z(1)));
  Complex b;
  if (a < 0)
    b = z(2) + std::conj(z(0)) * std::conj(z(1)) / std::abs(z(1));
  else if (std::abs(z(0)) > 0)
    b = z(2) + std::conj(z(0)) * std::conj(z(1)) / std::abs(z(0));
  else
    b = z(2);
  return {a, b};
}

ComplexPoint explicit_fiber_point(double a, Complex b, double theta, Complex w) {
  ComplexPoint z(3);
  const Complex phase = std::polar(1.0, theta);
  if (a >= 0) {
    z(0) = std::sqrt(std::norm(w) + 2.0 * a) * phase;
    z(1) = w;
  } else {
    z(0) = w;
    z(1) = std::sqrt(std::norm(w) - 2.0 * a) * phase;
  }
  z(2) = b - std::conj(w) / phase;
  return z;
}

ExplicitFiberReport explicit_fiber_check(double a, Complex b, int n_samples) {
  if (n_samples < 4) throw ValidationError("explicit_fiber_check: need samples");
  ExplicitFiberReport report;
  const int nt = std::max(2, static_cast<int>(std::sqrt(double(n_samples))));
  const int nw = (n_samples + nt - 1) / nt;
  const FlatForms forms(3);
  for (int it = 0; it < nt; ++it) {
    const double theta = kTau * it / nt;
    for (int iw = 0; iw < nw; ++iw) {
      // polar sweep of the free coordinate, including the center
      const double r = 1.2 * iw / std::max(1, nw - 1);
      const double ang = kTau * ((it + 0.37 * iw) / nt);
      const Complex w = std::polar(r, ang);
      const ComplexPoint z = explicit_fiber_point(a, b, theta, w);
      const auto [fa, fb] = explicit_fibration(z);
      report.max_a_variation = std::max(report.max_a_variation, std::abs(fa - a));
      report.max_b_variation = std::max(report.max_b_variation, std::abs(fb - b));
      if (a == 0 && std::abs(z(0)) == 0 && std::abs(z(1)) == 0 && z(2) == b)
        report.contains_singular_point = true;

      if (a == 0 && r < 0.05) continue;  // chart is not smooth at the cone point
      TangentFrame f;
      f.base = z;
      f.vectors.resize(3, 3);
      const double step = 1e-5;
      auto chart = [&](double th, Complex ww) { return explicit_fiber_point(a, b, th, ww); };
      f.vectors.col(0) = (chart(theta + step, w) - chart(theta - step, w)) / (2 * step);
      f.vectors.col(1) = (chart(theta, w + step) - chart(theta, w - step)) / (2 * step);
      f.vectors.col(2) =
          (chart(theta, w + Complex(0, step)) - chart(theta, w - Complex(0, step))) /
          (2 * step);
      const SLResidual r3 = sl_residual(f);
      report.max_sl_residual =
          std::max({report.max_sl_residual, r3.omega_norm, std::abs(r3.im_omega_val)});
      (void)forms;
    }
  }
  return report;
}

namespace {

struct KeyLess {
  bool operator()(const FiberKey& p, const FiberKey& q) const {
    if (p.a != q.a) return p.a < q.a;
    if (p.b != q.b) return p.b < q.b;
    return p.c < q.c;
  }
};

}  // namespace

Eigen::VectorXd flux_coordinates(const BoundaryFamily& family,
                                 const std::vector<FiberKey>& path,
                                 const FluxOptions& opt) {
  if (!family.mesh) throw ValidationError("flux_coordinates: family has no mesh");
  const auto& mesh = *family.mesh;
  if (path.size() < 1) throw ValidationError("flux_coordinates: empty path");
  for (const auto& k : path) {
    if (!family.box.contains(k)) throw ValidationError("flux_coordinates: key outside box");
    if (k.a == 0)
      throw PathSingularityError("flux_coordinates: path touches a singular fiber");
  }
  for (size_t i = 0; i + 1 < path.size(); ++i)
    if (path[i].a * path[i + 1].a < 0)
      throw PathSingularityError("flux_coordinates: path crosses the singular level");

  Eigen::VectorXd periods = Eigen::VectorXd::Zero(2);
  if (path.size() < 2) return periods;

  std::map<FiberKey, UVField, KeyLess> cache;
  auto field_of = [&](const FiberKey& key) -> const UVField& {
    auto it = cache.find(key);
    if (it == cache.end()) {
      const PotentialField f = solve_dirichlet(family.mesh, family.boundary_fn(key), key.a);
      it = cache.emplace(key, potential_to_uv(f)).first;
    }
    return it->second;
  };

  const double step_sup = opt.step_sup > 0 ? opt.step_sup : 0.1 * mesh.h;
  auto field_gap = [](const UVField& p, const UVField& q) {
    return std::max((p.u - q.u).lpNorm<Eigen::Infinity>(),
                    (p.v - q.v).lpNorm<Eigen::Infinity>());
  };

  // refine until adjacent solutions are close in the sup-norm
  std::vector<FiberKey> keys(path.begin(), path.end());
  for (int pass = 0; pass < opt.max_subdivide; ++pass) {
    bool split = false;
    std::vector<FiberKey> refined;
    refined.push_back(keys[0]);
    for (size_t i = 0; i + 1 < keys.size(); ++i) {
      if (field_gap(field_of(keys[i]), field_of(keys[i + 1])) > step_sup) {
        FiberKey mid{0.5 * (keys[i].a + keys[i + 1].a), 0.5 * (keys[i].b + keys[i + 1].b),
                     0.5 * (keys[i].c + keys[i + 1].c)};
        refined.push_back(mid);
        split = true;
      }
      refined.push_back(keys[i + 1]);
    }
    keys.swap(refined);
    if (!split) break;
  }

  // the two 1-cycles in the (x, y, psi) chart
  const int L = opt.cycle_samples;
  const int center = mesh.nearest_node(0.0, 0.0);
  double bx = 0, by = 0;
  for (const auto& p : mesh.boundary) {
    bx += p(0);
    by += p(1);
  }
  bx /= static_cast<double>(mesh.boundary.size());
  by /= static_cast<double>(mesh.boundary.size());

  std::vector<Eigen::Vector3d> orbit(L), planar(L);  // (x, y, psi)
  for (int s = 0; s < L; ++s) {
    orbit[s] = Eigen::Vector3d(mesh.nodes[center](0), mesh.nodes[center](1), kTau * s / L);
    const auto& q =
        mesh.boundary[(s * mesh.boundary.size()) / static_cast<size_t>(L)];
    planar[s] = Eigen::Vector3d(bx + opt.loop_scale * (q(0) - bx),
                                by + opt.loop_scale * (q(1) - by), 0.0);
  }

  const FlatForms forms(3);
  auto lift_cycle = [&](const UVField& field, const std::vector<Eigen::Vector3d>& cyc) {
    const GridInterp iu(mesh, field.u), iv(mesh, field.v);
    std::vector<ComplexPoint> pts(cyc.size());
    for (size_t s = 0; s < cyc.size(); ++s) {
      const double x = cyc[s](0), y = cyc[s](1);
      pts[s] = lift_point(field.a, x, y, iu(x, y), iv(x, y), cyc[s](2));
    }
    return pts;
  };

  for (int cyc = 0; cyc < 2; ++cyc) {
    const auto& loop = cyc == 0 ? orbit : planar;
    std::vector<ComplexPoint> prev = lift_cycle(field_of(keys[0]), loop);
    for (size_t i = 1; i < keys.size(); ++i) {
      const std::vector<ComplexPoint> next = lift_cycle(field_of(keys[i]), loop);
      double acc = 0;
      for (int s = 0; s < L; ++s) {
        const ComplexPoint &A = prev[s], &B = prev[(s + 1) % L];
        const ComplexPoint &C = next[(s + 1) % L], &D = next[s];
        acc += 0.5 * forms.kahler(B - A, C - A) + 0.5 * forms.kahler(C - A, D - A);
      }
      periods(cyc) += acc;
      prev = next;
    }
  }
  return periods;
}

}  // namespace slgeo

#include "slgeo/families.hpp"

#include <numeric>

namespace slgeo {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

// Central-difference tangent frame of a 3-parameter chart.
template <typename Map>
TangentFrame fd_frame(Map&& map, const Eigen::Vector3d& p, double step) {
  TangentFrame f;
  f.base = map(p);
  f.vectors.resize(3, 3);
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d hi = p, lo = p;
    hi(k) += step;
    lo(k) -= step;
    f.vectors.col(k) = (map(hi) - map(lo)) / (2.0 * step);
  }
  return f;
}

Eigen::VectorXd real_view(const ComplexPoint& z) {
  Eigen::VectorXd r(2 * z.size());
  for (int i = 0; i < z.size(); ++i) {
    r(2 * i) = z(i).real();
    r(2 * i + 1) = z(i).imag();
  }
  return r;
}

// Damped Gauss-Newton projection of `target` onto the chart `map`.
template <typename Map>
double project_distance(Map&& map, Eigen::Vector3d q, const ComplexPoint& target,
                        int iters = 8) {
  const Eigen::VectorXd t = real_view(target);
  double best = (real_view(map(q)) - t).norm();
  Eigen::Vector3d best_q = q;
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd r = real_view(map(q)) - t;
    Eigen::MatrixXd jac(r.size(), 3);
    const double step = 1e-6 * std::max(1.0, q.norm());
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d hi = q, lo = q;
      hi(k) += step;
      lo(k) -= step;
      jac.col(k) = (real_view(map(hi)) - real_view(map(lo))) / (2.0 * step);
    }
    Eigen::Matrix3d h = jac.transpose() * jac;
    h.diagonal().array() += 1e-12 * (1.0 + h.trace());
    const Eigen::Vector3d delta = h.ldlt().solve(-jac.transpose() * r);
    q += delta;
    const double d = (real_view(map(q)) - t).norm();
    if (d < best) {
      best = d;
      best_q = q;
    } else {
      q = best_q;  // keep the best iterate; stop on stagnation
      break;
    }
  }
  return best;
}

}  // namespace

void FamilySpec::validate() const {
  switch (kind) {
    case FamilyKind::kHlCone:
      break;
    case FamilyKind::kHlDesing:
    case FamilyKind::kSo3:
      if (!(t > 0)) throw ValidationError("family: t must be positive");
      break;
    case FamilyKind::kQuadric: {
      if (a1 <= 0 || a2 <= 0)
        throw ValidationError("family: quadric weights must be positive");
      if (std::gcd(a1, a2) != 1)
        throw ValidationError("family: quadric weights must be coprime");
      break;
    }
    case FamilyKind::kBranched: {
      if (u.size() != 3 || v.size() != 3)
        throw InvalidDimensionError("family: branched model needs u, v in C^3");
      const FlatForms forms(3);
      const double scale = u.norm() * v.norm();
      if (scale == 0 || std::abs(forms.kahler(u, v)) > 1e-10 * scale)
        throw ValidationError("family: branched model requires ω(u, v) = 0");
      CMatrix uv(3, 2);
      uv.col(0) = u;
      uv.col(1) = v;
      Eigen::JacobiSVD<CMatrix> svd(uv);
      if (svd.singularValues()(1) <= 1e-12 * svd.singularValues()(0))
        throw RankDeficiencyError("family: branched model requires independent u, v");
      break;
    }
  }
}

ComplexPoint hl_point(double t, double theta, Complex z) {
  if (t < 0) throw ValidationError("hl_point: t must be nonnegative");
  ComplexPoint p(3);
  const Complex phase(std::cos(theta), std::sin(theta));
  p(0) = std::sqrt(std::norm(z) + t * t) * phase;
  p(1) = z;
  p(2) = std::conj(z) / phase;
  return p;
}

ComplexPoint so3_point(double t, double theta, const Eigen::Vector3d& dir) {
  if (!(t > 0)) throw ValidationError("so3_point: t must be positive");
  if (!(theta > 0.0) || !(theta < kTau / 6.0))
    throw DomainError("so3_point: theta must lie strictly inside (0, pi/3)");
  if (std::abs(dir.norm() - 1.0) > 1e-9)
    throw ValidationError("so3_point: dir must be a unit vector");
  const double r = t * std::pow(std::sin(3.0 * theta), -1.0 / 3.0);
  const Complex phase(std::cos(theta), std::sin(theta));
  ComplexPoint p(3);
  for (int i = 0; i < 3; ++i) p(i) = phase * (r * dir(i));
  return p;
}

ComplexPoint quadric_point(int a1, int a2, double c, double theta,
                           const Eigen::Vector3d& x) {
  const int a3 = -(a1 + a2);
  const double q = a1 * x(0) * x(0) + a2 * x(1) * x(1) + a3 * x(2) * x(2);
  const double scale = std::max(1.0, std::abs(a3) * x.squaredNorm());
  if (std::abs(q - c) > 1e-9 * scale)
    throw OffQuadricError("quadric_point: x violates the quadric constraint");
  auto rot = [&](int a) { return Complex(std::cos(a * theta), std::sin(a * theta)); };
  ComplexPoint p(3);
  p(0) = rot(a1) * x(0);
  p(1) = rot(a2) * x(1);
  p(2) = Complex(0, 1) * rot(a3) * x(2);
  return p;
}

ComplexPoint cross3(const ComplexPoint& r, const ComplexPoint& s) {
  if (r.size() != 3 || s.size() != 3)
    throw InvalidDimensionError("cross3: arguments must lie in C^3");
  ComplexPoint out(3);
  out(0) = 0.5 * (std::conj(r(1)) * std::conj(s(2)) - std::conj(r(2)) * std::conj(s(1)));
  out(1) = 0.5 * (std::conj(r(2)) * std::conj(s(0)) - std::conj(r(0)) * std::conj(s(2)));
  out(2) = 0.5 * (std::conj(r(0)) * std::conj(s(1)) - std::conj(r(1)) * std::conj(s(0)));
  return out;
}

ComplexPoint branched_model_point(const CVector& u, const CVector& v,
                                  double x, double y, double t) {
  FamilySpec spec;
  spec.kind = FamilyKind::kBranched;
  spec.u = u;
  spec.v = v;
  spec.validate();
  const FlatForms forms(3);
  const double guv = forms.metric(u, v);
  const double uu = forms.metric(u, u);
  return (x + 0.25 * guv * t * t) * u + (y * y - 0.25 * uu * t * t) * v +
         (2.0 * y * t) * cross3(u, v);
}

double hl_membership(const ComplexPoint& p, double t) {
  if (p.size() != 3) throw InvalidDimensionError("hl_membership: point must lie in C^3");
  const double n1 = std::norm(p(0)), n2 = std::norm(p(1)), n3 = std::norm(p(2));
  const Complex prod = p(0) * p(1) * p(2);
  double r = std::abs(n1 - t * t - n2);
  r = std::max(r, std::abs(n2 - n3));
  r = std::max(r, std::abs(prod.imag()));
  r = std::max(r, std::max(0.0, -prod.real()));
  return r;
}

SampleCloud sample_family(const FamilySpec& spec, const SampleOptions& opt) {
  spec.validate();
  SampleCloud cloud;
  cloud.family = spec;
  cloud.points.reserve(opt.count);
  if (opt.frames) cloud.frames.reserve(opt.count);
  auto rng = seeded_rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;

  auto push = [&](auto&& map, const Eigen::Vector3d& p) {
    if (opt.frames) {
      TangentFrame f = fd_frame(map, p, opt.fd_step);
      cloud.points.push_back(f.base);
      cloud.frames.push_back(std::move(f));
    } else {
      cloud.points.push_back(map(p));
    }
  };

  for (int n = 0; n < opt.count; ++n) {
    switch (spec.kind) {
      case FamilyKind::kHlCone:
      case FamilyKind::kHlDesing: {
        const double t = spec.kind == FamilyKind::kHlCone ? 0.0 : spec.t;
        const double rmin = spec.kind == FamilyKind::kHlCone ? 0.15 : 0.0;
        const double theta = kTau * unit(rng);
        const double phi = kTau * unit(rng);
        const double rad = rmin + (1.2 - rmin) * unit(rng);
        const Eigen::Vector3d p(theta, rad * std::cos(phi), rad * std::sin(phi));
        push([t](const Eigen::Vector3d& q) {
          return hl_point(t, q(0), Complex(q(1), q(2)));
        }, p);
        break;
      }
      case FamilyKind::kSo3: {
        const double margin = 0.02;
        const double theta = margin + (kTau / 6.0 - 2 * margin) * unit(rng);
        Eigen::Vector3d dir(gauss(rng), gauss(rng), gauss(rng));
        while (dir.norm() < 1e-3) dir = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        dir.normalize();
        Eigen::Vector3d axis = std::abs(dir(0)) < 0.9 ? Eigen::Vector3d::UnitX()
                                                      : Eigen::Vector3d::UnitY();
        const Eigen::Vector3d ea = dir.cross(axis).normalized();
        const Eigen::Vector3d eb = dir.cross(ea);
        const double t = spec.t;
        push([t, dir, ea, eb](const Eigen::Vector3d& q) {
          const Eigen::Vector3d d = (dir + q(1) * ea + q(2) * eb).normalized();
          return so3_point(t, q(0), d);
        }, Eigen::Vector3d(theta, 0, 0));
        break;
      }
      case FamilyKind::kQuadric: {
        const int a1 = spec.a1, a2 = spec.a2;
        const double c = spec.c;
        const double span = 1.0 + std::abs(c);
        const double lo = std::max(0.01, c + 0.05 * span);
        const double rho2 = lo + (c + 1.5 * span - lo) * unit(rng);
        const double chi = kTau * unit(rng);
        const double sgn = unit(rng) < 0.5 ? -1.0 : 1.0;
        const double x1 = std::sqrt(rho2) * std::cos(chi) / std::sqrt(double(a1));
        const double x2 = std::sqrt(rho2) * std::sin(chi) / std::sqrt(double(a2));
        const double theta = kTau * unit(rng);
        push([a1, a2, c, sgn](const Eigen::Vector3d& q) {
          const double s = a1 * q(1) * q(1) + a2 * q(2) * q(2) - c;
          const Eigen::Vector3d x(q(1), q(2), sgn * std::sqrt(std::max(0.0, s) / (a1 + a2)));
          return quadric_point(a1, a2, c, q(0), x);
        }, Eigen::Vector3d(theta, x1, x2));
        break;
      }
      case FamilyKind::kBranched: {
        const Eigen::Vector3d p(0.6 * unit(rng) - 0.3, 0.6 * unit(rng) - 0.3,
                                0.6 * unit(rng) - 0.3);
        const CVector u = spec.u, v = spec.v;
        push([u, v](const Eigen::Vector3d& q) {
          return branched_model_point(u, v, q(0), q(1), q(2));
        }, p);
        break;
      }
    }
  }
  return cloud;
}

double asymptotic_cone_distance(const SampleCloud& cloud, const FamilySpec& cone,
                                double radius) {
  cone.validate();
  if (!cone.is_cone())
    throw DomainError("asymptotic_cone_distance: comparison family is not a cone");
  if (!(radius > 0)) throw ValidationError("asymptotic_cone_distance: radius must be positive");

  std::vector<const ComplexPoint*> inside;
  for (const auto& p : cloud.points)
    if (p.norm() <= radius) inside.push_back(&p);
  if (inside.empty())
    throw EmptySampleError("asymptotic_cone_distance: no cloud points inside the ball");

  // Seed grid over the cone chart, then a per-point projection refinement.
  std::vector<Eigen::Vector3d> seeds;
  double worst = 0;
  if (cone.kind == FamilyKind::kHlCone) {
    auto map = [](const Eigen::Vector3d& q) {
      ComplexPoint p(3);
      p(0) = q(0) * Complex(std::cos(q(1)), std::sin(q(1)));
      p(1) = q(0) * Complex(std::cos(q(2)), std::sin(q(2)));
      p(2) = q(0) * Complex(std::cos(q(1) + q(2)), -std::sin(q(1) + q(2)));
      return p;
    };
    const int nr = 20, na = 22;
    const double rmax = 1.05 * radius / std::sqrt(3.0);
    seeds.reserve(nr * na * na);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < na; ++j)
        for (int k = 0; k < na; ++k)
          seeds.emplace_back(rmax * (i + 1) / nr, kTau * j / na, kTau * k / na);
    for (const auto* p : inside) {
      double best = p->norm();  // the cone vertex
      Eigen::Vector3d best_q = Eigen::Vector3d::Zero();
      for (const auto& s : seeds) {
        const double d = (real_view(map(s)) - real_view(*p)).norm();
        if (d < best) {
          best = d;
          best_q = s;
        }
      }
      if (best_q(0) > 0) best = std::min(best, project_distance(map, best_q, *p));
      worst = std::max(worst, best);
    }
  } else {
    const int a1 = cone.a1, a2 = cone.a2;
    auto branch_map = [a1, a2](double sgn) {
      return [a1, a2, sgn](const Eigen::Vector3d& q) {
        const double s = a1 * q(1) * q(1) + a2 * q(2) * q(2);
        const Eigen::Vector3d x(q(1), q(2), sgn * std::sqrt(s / (a1 + a2)));
        return quadric_point(a1, a2, 0.0, q(0), x);
      };
    };
    const int nt = 16, nc = 16, nr = 19;
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < nc; ++j)
        for (int k = 0; k < nr; ++k) {
          const double rho = 1.1 * radius * (k + 1) / nr;
          seeds.emplace_back(kTau * i / nt,
                             rho * std::cos(kTau * j / nc) / std::sqrt(double(a1)),
                             rho * std::sin(kTau * j / nc) / std::sqrt(double(a2)));
        }
    for (const auto* p : inside) {
      double best = p->norm();  // the cone vertex
      for (double sgn : {-1.0, 1.0}) {
        auto map = branch_map(sgn);
        double seed_best = best;
        Eigen::Vector3d best_q = Eigen::Vector3d::Zero();
        for (const auto& s : seeds) {
          const double d = (real_view(map(s)) - real_view(*p)).norm();
          if (d < seed_best) {
            seed_best = d;
            best_q = s;
          }
        }
        best = seed_best;
        if (best_q.tail<2>().norm() > 0)
          best = std::min(best, project_distance(map, best_q, *p));
      }
      worst = std::max(worst, best);
    }
  }
  return worst;
}

}  // namespace slgeo

#include "slgeo/evolver.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace slgeo {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

// Finite-difference tangent along one grid axis: central in the interior and
// at periodic wraps, one-sided 3-point at open ends.
CVector grid_tangent(const PatchState& s, int i, int j, int axis) {
  const int n = axis == 0 ? s.n1 : s.n2;
  const double h = axis == 0 ? s.h1 : s.h2;
  const bool periodic = axis == 0 ? s.periodic1 : s.periodic2;
  auto at = [&](int k) -> const ComplexPoint& {
    return axis == 0 ? s.at(((k % n) + n) % n, j) : s.at(i, ((k % n) + n) % n);
  };
  const int c = axis == 0 ? i : j;
  if (periodic || (c > 0 && c < n - 1)) return (at(c + 1) - at(c - 1)) / (2.0 * h);
  if (c == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
}

CVector holomorphic_cross(const CVector& u, const CVector& v) {
  CVector c(3);
  c(0) = u(1) * v(2) - u(2) * v(1);
  c(1) = u(2) * v(0) - u(0) * v(2);
  c(2) = u(0) * v(1) - u(1) * v(0);
  return c;
}

CVector velocity_from(const PatchState& s, int i, int j, const CVector& d1,
                      const CVector& d2) {
  CMatrix push(3, 2);
  push.col(0) = d1;
  push.col(1) = d2;
  Eigen::JacobiSVD<CMatrix> svd(push);
  if (svd.singularValues()(1) <= 1e-12 * svd.singularValues()(0))
    throw RankDeficiencyError("velocity: degenerate pushforward");
  // Contraction with Re Ω then the metric: conj of the holomorphic cross.
  return s.chi(s.index(i, j)) * holomorphic_cross(d1, d2).conjugate();
}

bool finite(const ComplexPoint& p) {
  for (int k = 0; k < p.size(); ++k)
    if (!std::isfinite(p(k).real()) || !std::isfinite(p(k).imag())) return false;
  return true;
}

}  // namespace

void PatchState::validate() const {
  if (n1 < 3 || n2 < 3) throw ValidationError("patch: grid must be at least 3 x 3");
  if (!(h1 > 0) || !(h2 > 0)) throw ValidationError("patch: spacings must be positive");
  if (static_cast<int>(samples.size()) != n1 * n2 || chi.size() != n1 * n2)
    throw ValidationError("patch: samples/chi size mismatch");
  for (const auto& p : samples)
    if (p.size() != 3) throw InvalidDimensionError("patch: samples must lie in C^3");
  for (int k = 0; k < chi.size(); ++k)
    if (chi(k) == 0) throw ValidationError("patch: chi must be nonvanishing");
}

CVector velocity(const PatchState& state, int i, int j) {
  return velocity_from(state, i, j, grid_tangent(state, i, j, 0),
                       grid_tangent(state, i, j, 1));
}

std::vector<CVector> velocity_field(const PatchState& state) {
  std::vector<CVector> v(state.samples.size());
  for (int j = 0; j < state.n2; ++j)
    for (int i = 0; i < state.n1; ++i) v[state.index(i, j)] = velocity(state, i, j);
  return v;
}

double dt_max(const PatchState& state) {
  double vmax = 0;
  for (const auto& v : velocity_field(state)) vmax = std::max(vmax, v.norm());
  if (vmax == 0) return std::numeric_limits<double>::infinity();
  return 0.25 * std::min(state.h1, state.h2) / vmax;
}

PatchState step(const PatchState& state, double dt) {
  state.validate();
  if (std::abs(dt) > dt_max(state) * (1.0 + 1e-9))
    throw ValidationError("step: |dt| exceeds the stability bound");
  auto shifted = [&](const std::vector<CVector>& k, double f) {
    PatchState s = state;
    for (size_t n = 0; n < s.samples.size(); ++n) s.samples[n] += f * k[n];
    return s;
  };
  const auto k1 = velocity_field(state);
  const auto k2 = velocity_field(shifted(k1, 0.5 * dt));
  const auto k3 = velocity_field(shifted(k2, 0.5 * dt));
  const auto k4 = velocity_field(shifted(k3, dt));
  PatchState out = state;
  for (size_t n = 0; n < out.samples.size(); ++n)
    out.samples[n] += (dt / 6.0) * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
  out.time += dt;
  for (const auto& p : out.samples)
    if (!finite(p)) throw BlowUpError("step: state blew up", state);
  return out;
}

double omega_drift(const PatchState& state) {
  const FlatForms forms(3);
  double worst = 0;
  for (int j = 0; j < state.n2; ++j)
    for (int i = 0; i < state.n1; ++i)
      worst = std::max(worst, std::abs(forms.kahler(grid_tangent(state, i, j, 0),
                                                    grid_tangent(state, i, j, 1))));
  return worst;
}

SweepResult sweep(const PatchState& initial, int steps, double dt, int keep_every,
                  double init_tol) {
  initial.validate();
  if (steps < 0) throw ValidationError("sweep: steps must be nonnegative");
  if (keep_every < 1) keep_every = 1;
  if (omega_drift(initial) > init_tol)
    throw ValidationError("sweep: seed violates the Lagrangian constraint");

  SweepResult result;
  result.drift_history.push_back(omega_drift(initial));

  auto collect = [&](const PatchState& s) {
    for (int j = 0; j < s.n2; ++j)
      for (int i = 0; i < s.n1; ++i) {
        result.cloud.points.push_back(s.at(i, j));
        TangentFrame f;
        f.base = s.at(i, j);
        f.vectors.resize(3, 3);
        try {
          const CVector d1 = grid_tangent(s, i, j, 0);
          const CVector d2 = grid_tangent(s, i, j, 1);
          f.vectors.col(0) = velocity_from(s, i, j, d1, d2);
          f.vectors.col(1) = d1;
          f.vectors.col(2) = d2;
          const SLResidual r = sl_residual(f);
          result.max_sl_residual =
              std::max({result.max_sl_residual, r.omega_norm, std::abs(r.im_omega_val)});
          result.cloud.frames.push_back(std::move(f));
        } catch (const RankDeficiencyError&) {
          // degenerate spot (e.g. a momentary caustic); keep the point only
        }
      }
  };

  PatchState state = initial;
  collect(state);
  for (int n = 1; n <= steps; ++n) {
    state = step(state, dt);
    result.drift_history.push_back(omega_drift(state));
    if (n % keep_every == 0 || n == steps) collect(state);
  }
  result.final_state = std::move(state);
  return result;
}

PatchState quadric_seed(int a1, int a2, double c, int n_angle, int n_hyp,
                        double hyp_range) {
  if (a1 <= 0 || a2 <= 0 || std::gcd(a1, a2) != 1)
    throw ValidationError("quadric_seed: weights must be positive coprime");
  if (!(c > 0)) throw ValidationError("quadric_seed: level c must be positive");
  if (n_angle < 3 || n_hyp < 3) throw ValidationError("quadric_seed: grid too small");

  PatchState s;
  s.n1 = n_angle;
  s.n2 = n_hyp;
  s.h1 = kTau / n_angle;
  s.h2 = 2.0 * hyp_range / (n_hyp - 1);
  s.periodic1 = true;
  s.periodic2 = false;
  s.samples.resize(size_t(n_angle) * n_hyp);
  s.chi = Eigen::VectorXd::Ones(n_angle * n_hyp);

  const double r1 = std::sqrt(c / a1), r2 = std::sqrt(c / a2);
  const double r3 = std::sqrt(c / (a1 + a2));
  for (int j = 0; j < n_hyp; ++j) {
    const double tau = -hyp_range + j * s.h2;
    for (int i = 0; i < n_angle; ++i) {
      const double psi = i * s.h1;
      ComplexPoint p(3);
      p(0) = r1 * std::cosh(tau) * std::cos(psi);
      p(1) = r2 * std::cosh(tau) * std::sin(psi);
      p(2) = Complex(0, r3 * std::sinh(tau));
      s.samples[s.index(i, j)] = p;
    }
  }

  // Calibrate chi so the velocity equals the closed-form angular derivative
  // at unit rate. The two are parallel; the ratio is taken by projection.
  const int a3 = -(a1 + a2);
  for (int j = 0; j < n_hyp; ++j)
    for (int i = 0; i < n_angle; ++i) {
      const ComplexPoint& p = s.at(i, j);
      CVector target(3);
      target(0) = Complex(0, 1) * double(a1) * p(0);
      target(1) = Complex(0, 1) * double(a2) * p(1);
      target(2) = Complex(0, 1) * double(a3) * p(2);
      const CVector v1 = velocity(s, i, j);
      const double vv = v1.squaredNorm();
      if (vv == 0) throw RankDeficiencyError("quadric_seed: degenerate node");
      s.chi(s.index(i, j)) = target.dot(v1).real() / vv;
    }
  return s;
}

ComplexPoint quadric_seed_reference(const ComplexPoint& seed_sample, int a1, int a2,
                                    double t) {
  const int a3 = -(a1 + a2);
  ComplexPoint p(3);
  p(0) = std::polar(1.0, a1 * t) * seed_sample(0);
  p(1) = std::polar(1.0, a2 * t) * seed_sample(1);
  p(2) = std::polar(1.0, a3 * t) * seed_sample(2);
  return p;
}

}  // namespace slgeo

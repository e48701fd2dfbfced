#pragma once

#include <utility>
#include <vector>

#include "slgeo/families.hpp"

namespace slgeo {

// Discretized 1-parameter family state: a 2-parameter grid of points of C^3
// (the codimension-one seed of a 3-fold) together with the area density chi
// that scales the evolution speed. Immutable under the step operation, which
// returns a new state.
struct PatchState {
  int n1 = 0, n2 = 0;        // grid dimensions (axis 1 fastest)
  double h1 = 0, h2 = 0;     // parameter spacings
  bool periodic1 = false, periodic2 = false;
  std::vector<ComplexPoint> samples;  // n1 * n2 points of C^3
  Eigen::VectorXd chi;                // per-sample density, nonvanishing
  double time = 0;

  int index(int i, int j) const { return j * n1 + i; }
  const ComplexPoint& at(int i, int j) const { return samples[index(i, j)]; }
  void validate() const;
};

struct BlowUpError : Error {
  PatchState last_state;
  BlowUpError(const std::string& msg, PatchState s)
      : Error(msg), last_state(std::move(s)) {}
};

// Velocity of the evolution at grid node (i, j): the contraction of the
// pushforward area bivector (finite differences of the sample grid) with
// Re Ω, index-raised by the Euclidean metric. Scales linearly with chi.
CVector velocity(const PatchState& state, int i, int j);

std::vector<CVector> velocity_field(const PatchState& state);

// Stability bound for explicit stepping: 0.25 * min(h1, h2) / max |velocity|.
double dt_max(const PatchState& state);

// One classical 4th-order explicit step applied samplewise.
PatchState step(const PatchState& state, double dt);

// Max over samples of |ω(D1 φ, D2 φ)| with finite-difference grid tangents:
// the discrete Lagrangian constraint, conserved by the continuum flow.
double omega_drift(const PatchState& state);

struct SweepResult {
  SampleCloud cloud;            // union of the kept evolved leaves
  double max_sl_residual = 0;   // worst omega / Im-volume residual over frames
  std::vector<double> drift_history;
  PatchState final_state;
};

// Evolve `steps` steps of size dt, collecting leaves every keep_every steps
// with frames (parameter tangents plus the velocity direction).
SweepResult sweep(const PatchState& initial, int steps, double dt,
                  int keep_every = 1, double init_tol = 1e-9);

// Quadric seed at the symmetric slice of the rotating-quadric family, on a
// (angle, hyperbolic) grid with chi calibrated so the evolution reproduces
// the closed form at unit angular rate.
PatchState quadric_seed(int a1, int a2, double c, int n_angle, int n_hyp,
                        double hyp_range);

// The closed-form point a calibrated quadric seed sample reaches at
// evolution time t: the weighted phase rotation of the seed point.
ComplexPoint quadric_seed_reference(const ComplexPoint& seed_sample, int a1, int a2,
                                    double t);

}  // namespace slgeo

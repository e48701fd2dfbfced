#pragma once

#include "slgeo/forms.hpp"

namespace slgeo {

// Calibration residuals of an oriented tangent frame. The frame is
// orthonormalized first so all three numbers are scale-free: omega_norm and
// im_omega_val vanish exactly on special Lagrangian planes, and calib_ratio
// is the calibration ratio Re Ω / vol in [-1, 1].
SLResidual sl_residual(const TangentFrame& frame, double rank_tol = 1e-12);

// Im det_C(I + i H) for a symmetric real Hessian H. Zero iff the gradient
// graph built from a potential with this Hessian is special Lagrangian at
// the point. Computed by complex LU with partial pivoting.
double graph_residual(const Eigen::MatrixXd& hess);

// Trace of H, the linearization of graph_residual around H = 0.
double graph_linearization(const Eigen::MatrixXd& hess);

// |dw_1 ∧ dw_2| on the orthonormalized 2-frame, in the alternative complex
// coordinates w_1 = x_0 + i x_2, w_2 = x_1 − i x_3 of C^2 ≅ R^4. Vanishes
// exactly on special Lagrangian 2-planes, which are the holomorphic curves
// of this second complex structure.
double j_holomorphic_residual(const TangentFrame& frame);

// Dimension (m^2 + m - 2) / 2 of the family of special Lagrangian m-planes.
int sl_plane_family_dim(int m);

// Conformal normalization factor: f with f^{2m} * omega_top = omega_omega_bar,
// where omega_top is ω^m/m! on an oriented frame and omega_omega_bar the value
// of (-1)^{m(m-1)/2} (i/2)^m Ω∧Ω̄ on the same frame. Equals 1 when the metric
// volume and the holomorphic volume agree.
double conformal_factor(double omega_top, double omega_omega_bar, int m);

}  // namespace slgeo

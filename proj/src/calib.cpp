#include "slgeo/calib.hpp"

namespace slgeo {

SLResidual sl_residual(const TangentFrame& frame, double rank_tol) {
  const int m = frame.m();
  if (m < 2) throw InvalidDimensionError("sl_residual: ambient dimension must be >= 2");
  if (frame.vectors.cols() != m)
    throw InvalidDimensionError("sl_residual: frame must have m tangent vectors");
  if (frame.orientation != 1 && frame.orientation != -1)
    throw ValidationError("sl_residual: orientation must be +1 or -1");

  const FlatForms forms(m);
  const CMatrix q = orthonormalize_real(frame.vectors, rank_tol);

  SLResidual r;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      r.omega_norm = std::max(r.omega_norm, std::abs(forms.kahler(q.col(i), q.col(j))));
  const Complex vol = double(frame.orientation) * forms.volume(q);
  r.im_omega_val = vol.imag();
  r.calib_ratio = vol.real();
  return r;
}

double graph_residual(const Eigen::MatrixXd& hess) {
  const int m = static_cast<int>(hess.rows());
  if (m < 2 || hess.cols() != m)
    throw InvalidDimensionError("graph_residual: Hessian must be m x m with m >= 2");
  if ((hess - hess.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw ValidationError("graph_residual: Hessian must be symmetric as stored");
  CMatrix a = Complex(0, 1) * hess.cast<Complex>();
  a += CMatrix::Identity(m, m);
  return Eigen::PartialPivLU<CMatrix>(a).determinant().imag();
}

double graph_linearization(const Eigen::MatrixXd& hess) {
  if (hess.rows() != hess.cols())
    throw InvalidDimensionError("graph_linearization: Hessian must be square");
  if ((hess - hess.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw ValidationError("graph_linearization: Hessian must be symmetric as stored");
  return hess.trace();
}

double j_holomorphic_residual(const TangentFrame& frame) {
  if (frame.m() != 2)
    throw InvalidDimensionError("j_holomorphic_residual: defined for m = 2 only");
  const CMatrix q = orthonormalize_real(frame.vectors);
  auto w1 = [](const CVector& v) { return Complex(v(0).real(), v(1).real()); };
  auto w2 = [](const CVector& v) { return Complex(v(0).imag(), -v(1).imag()); };
  return std::abs(w1(q.col(0)) * w2(q.col(1)) - w1(q.col(1)) * w2(q.col(0)));
}

int sl_plane_family_dim(int m) {
  if (m < 2) throw InvalidDimensionError("sl_plane_family_dim: m must be >= 2");
  return (m * m + m - 2) / 2;
}

double conformal_factor(double omega_top, double omega_omega_bar, int m) {
  if (m < 2) throw InvalidDimensionError("conformal_factor: m must be >= 2");
  if (!(omega_top > 0) || !(omega_omega_bar > 0))
    throw InvalidVolumeError("conformal_factor: volume values must be positive");
  return std::pow(omega_omega_bar / omega_top, 1.0 / (2.0 * m));
}

}  // namespace slgeo

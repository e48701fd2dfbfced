#include "slgeo/forms.hpp"

namespace slgeo {

FlatForms::FlatForms(int m) : m_(m) {
  if (m < 2) throw InvalidDimensionError("FlatForms: ambient dimension must be >= 2");
}

double FlatForms::metric(const CVector& u, const CVector& v) const {
  return u.dot(v).real();  // Eigen's dot conjugates the first argument
}

double FlatForms::kahler(const CVector& u, const CVector& v) const {
  // ω(u, v) = Im Σ conj(u_j) v_j.
  return u.dot(v).imag();
}

Complex FlatForms::volume(const CMatrix& vecs) const {
  if (vecs.rows() != m_ || vecs.cols() != m_)
    throw InvalidDimensionError("FlatForms::volume: expected m vectors of C^m");
  if (m_ == 2) return vecs(0, 0) * vecs(1, 1) - vecs(0, 1) * vecs(1, 0);
  if (m_ == 3)
    return vecs(0, 0) * (vecs(1, 1) * vecs(2, 2) - vecs(1, 2) * vecs(2, 1)) -
           vecs(0, 1) * (vecs(1, 0) * vecs(2, 2) - vecs(1, 2) * vecs(2, 0)) +
           vecs(0, 2) * (vecs(1, 0) * vecs(2, 1) - vecs(1, 1) * vecs(2, 0));
  return Eigen::PartialPivLU<CMatrix>(vecs).determinant();
}

CMatrix orthonormalize_real(const CMatrix& vectors, double rank_tol) {
  const int m = static_cast<int>(vectors.cols());
  CMatrix q = vectors;
  double scale = 0;
  for (int j = 0; j < m; ++j) scale = std::max(scale, vectors.col(j).norm());
  if (scale == 0) throw RankDeficiencyError("orthonormalize_real: zero frame");
  for (int j = 0; j < m; ++j) {
    // two projection passes for numerical orthogonality
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < j; ++k)
        q.col(j) -= q.col(k).dot(q.col(j)).real() * q.col(k);
    const double n = q.col(j).norm();
    if (n <= rank_tol * scale)
      throw RankDeficiencyError("orthonormalize_real: linearly dependent frame");
    q.col(j) /= n;
  }
  return q;
}

CMatrix random_su(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  CMatrix a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * CMatrix::Identity(m, m);
  const CMatrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  // absorb the unit determinant phase into the first column
  const Complex det = Eigen::PartialPivLU<CMatrix>(q).determinant();
  q.col(0) /= det;
  return q;
}

}  // namespace slgeo

#pragma once

#include <random>

#include "slgeo/types.hpp"

namespace slgeo {

// Flat Kähler structure of C^m: the Euclidean metric g, the Kähler form ω
// and the holomorphic volume form Ω = dz_1 ∧ ... ∧ dz_m. Evaluators are
// multilinear and alternating in their vector arguments. A real m-plane is
// special Lagrangian exactly when ω and Im Ω vanish on it.
class FlatForms {
 public:
  explicit FlatForms(int m);

  int m() const { return m_; }

  double metric(const CVector& u, const CVector& v) const;
  double kahler(const CVector& u, const CVector& v) const;

  // Ω on m tangent vectors (the columns of vecs).
  Complex volume(const CMatrix& vecs) const;
  double re_volume(const CMatrix& vecs) const { return volume(vecs).real(); }
  double im_volume(const CMatrix& vecs) const { return volume(vecs).imag(); }

 private:
  int m_;
};

// Gram–Schmidt with the real inner product Re⟨u,v⟩, preserving the column
// order (and hence the induced orientation). Throws RankDeficiencyError when
// the columns fail to be linearly independent over R.
CMatrix orthonormalize_real(const CMatrix& vectors, double rank_tol = 1e-12);

// Haar-distributed SU(m) sample: QR of a complex Gaussian matrix with
// column-phase fixing, then a determinant phase correction.
CMatrix random_su(int m, std::mt19937_64& rng);

inline std::mt19937_64 seeded_rng(uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace slgeo

#pragma once

#include <vector>

#include "slgeo/types.hpp"

namespace slgeo {

struct BettiData {
  int b1 = 0;          // first Betti number
  int b0 = 1;          // connected components
  int b1_cs = 0;       // compactly-supported first Betti number
  int b_m_minus_1 = 0; // (m-1)-th Betti number

  void validate() const {
    if (b1 < 0 || b0 < 0 || b1_cs < 0 || b_m_minus_1 < 0)
      throw ValidationError("betti: numbers must be nonnegative");
  }
};

// Dimension of the deformation space of a compact special Lagrangian: b1.
int mclean_dim(const BettiData& betti);

// Dimension of the rate-lambda deformation space of an asymptotically
// conical special Lagrangian: b1 - b0 + N(lambda) for lambda in (0, 2), and
// b1_cs for lambda in (2 - m, 0). The caller checks lambda avoids the
// exponent set.
int ac_moduli_dim(const BettiData& betti, int m, double lambda, int N_of_lambda);

// Index of a conically singular member inside the nonsingular moduli space:
// 1 - b0(X') + sum b1_cs(L_i) + sum s-ind(C_i).
int singularity_index(int b0_xprime, const std::vector<int>& b1cs_list,
                      const std::vector<int>& sind_list);

struct ObstructionReport {
  bool satisfied = false;
  std::vector<int> failing_omega;     // indices of nonvanishing area pairings
  std::vector<int> failing_im_omega;  // indices of nonvanishing volume pairings
};

// Necessary cohomological condition for a special Lagrangian representative:
// every supplied pairing of the Kähler class and the imaginary volume class
// must vanish. An empty pairing list is vacuously satisfied.
ObstructionReport obstruction_check(const std::vector<double>& omega_pairings,
                                    const std::vector<double>& im_omega_pairings,
                                    double tol = 1e-10);

}  // namespace slgeo

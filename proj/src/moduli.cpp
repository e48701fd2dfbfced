#include "slgeo/moduli.hpp"

namespace slgeo {

int mclean_dim(const BettiData& betti) {
  betti.validate();
  return betti.b1;
}

int ac_moduli_dim(const BettiData& betti, int m, double lambda, int N_of_lambda) {
  betti.validate();
  if (m <= 2) throw InvalidDimensionError("ac_moduli_dim: requires m > 2");
  if (lambda >= 2) throw DomainError("ac_moduli_dim: rate must satisfy lambda < 2");
  if (lambda > 0) return betti.b1 - betti.b0 + N_of_lambda;
  if (lambda > 2.0 - m && lambda < 0) return betti.b1_cs;
  throw DomainError("ac_moduli_dim: rate outside (2 - m, 0) and (0, 2)");
}

int singularity_index(int b0_xprime, const std::vector<int>& b1cs_list,
                      const std::vector<int>& sind_list) {
  if (b0_xprime < 1) throw ValidationError("singularity_index: b0 must be positive");
  if (b1cs_list.empty() || b1cs_list.size() != sind_list.size())
    throw ValidationError("singularity_index: cone lists must be nonempty and equal");
  int total = 1 - b0_xprime;
  for (size_t i = 0; i < b1cs_list.size(); ++i) {
    if (b1cs_list[i] < 0)
      throw ValidationError("singularity_index: negative Betti input");
    if (sind_list[i] < 0)
      throw InconsistencyError("singularity_index: negative stability index input");
    total += b1cs_list[i] + sind_list[i];
  }
  return total;
}

ObstructionReport obstruction_check(const std::vector<double>& omega_pairings,
                                    const std::vector<double>& im_omega_pairings,
                                    double tol) {
  ObstructionReport report;
  for (size_t i = 0; i < omega_pairings.size(); ++i)
    if (std::abs(omega_pairings[i]) > tol)
      report.failing_omega.push_back(static_cast<int>(i));
  for (size_t i = 0; i < im_omega_pairings.size(); ++i)
    if (std::abs(im_omega_pairings[i]) > tol)
      report.failing_im_omega.push_back(static_cast<int>(i));
  report.satisfied = report.failing_omega.empty() && report.failing_im_omega.empty();
  return report;
}

}  // namespace slgeo

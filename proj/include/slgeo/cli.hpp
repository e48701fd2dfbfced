#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace slgeo {

enum class Subcommand { kVerify, kSolve, kFiber, kEvolve, kSpectrum, kIndex };

// Batch run description. The seed fully determines every randomized sample,
// and reports render floating point with fixed 17-significant-digit
// formatting, so identical configs produce byte-identical artifacts.
struct RunConfig {
  Subcommand cmd = Subcommand::kVerify;
  std::string input_path;   // JSON problem file, where the subcommand takes one
  std::string output_path;  // report path or artifact prefix
  std::optional<double> tol_override;
  uint64_t seed = 1;
  nlohmann::json params;  // subcommand flags not covered by the fields above
};

// Executes the run and writes its artifacts. Exit status: 0 on success, 2
// when a validation check fails (the report carries a `violations` array),
// 1 on errors (bad input, solver failure).
int dispatch(const RunConfig& config);

}  // namespace slgeo

#ifndef LATTICEGUIDE_COMMANDS_HPP
#define LATTICEGUIDE_COMMANDS_HPP

#include <iosfwd>
#include <string>

#include "latticeguide/core.hpp"

namespace latticeguide {

// Exit codes shared by the CLI surface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitClassification = 3;
inline constexpr int kExitBadGapIndex = 4;
inline constexpr int kExitSweepFailures = 5;
inline constexpr int kExitVerifyFailed = 6;

struct RunConfig {
  LatticeParams params;
  FrequencyWindow window{0.05, 6.3};
  double resolution = 0.0;  // 0 -> min(a) * 1e-3
  Tolerances tol;
  int K = 40;                // lattice truncation radius for oracle checks
  int grid = 200;            // oracle scan grid per gap
  int beta_samples = 17;     // rows of a dispersion sweep
  int gap_index = -1;        // eigen: restrict to one gap (-1 = all)
  int profile_K = 0;         // eigen: attach mode profiles when > 0
  int dispersion_grid = 16;  // (xi, eta) grid per axis
  enum class Format { kJson, kCsv } format = Format::kJson;
  std::string out_path;  // empty -> stdout
  double verify_dw = 1e-3;
  double verify_residual = 1e-6;
  double verify_quad = 1e-8;
};

// Each command writes its serialized result to config.out_path (or stdout)
// and returns a process exit code. Diagnostics go to `err`.
int cmd_gaps(const RunConfig& config, std::ostream& err);
int cmd_eigen(const RunConfig& config, std::ostream& err);
int cmd_bands(const RunConfig& config, std::ostream& err);
int cmd_dispersion(const RunConfig& config, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& err);

}  // namespace latticeguide

#endif  // LATTICEGUIDE_COMMANDS_HPP

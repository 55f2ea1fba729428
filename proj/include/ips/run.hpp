#pragma once

#include <string>

#include "ips/config.hpp"

namespace ips {

inline constexpr const char* kVersion = "ips 0.1.0";
inline constexpr const char* kOutRootEnv = "IPS_OUT_ROOT";

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 config error, 2 runtime error
  std::string message;
  std::string out_dir;
};

// out_dir resolved against $IPS_OUT_ROOT when relative
std::string resolve_out_dir(const std::string& dir);

// Runs the configured ensemble and writes the artifact set: an INCOMPLETE
// marker held for the duration of the run, the canonical config echo, sampled
// trajectory and current CSVs, per-mode field series, structure functions,
// widths and the exponent fit, block-replacement residuals, a plot script,
// and a manifest. Reruns with the same config are byte-identical.
RunResult run_experiment(const std::string& config_path);

}  // namespace ips

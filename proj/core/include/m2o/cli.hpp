#pragma once

#include <string>
#include <vector>

namespace m2o {

/* Command dispatcher behind the m2o binary.
 *
 * Exit codes: 0 success, 1 invariant violation detected by a scan
 * (gap budget exceeded, leakage above its ceiling), 2 usage or config
 * error. The binary is a thin wrapper so tests can drive the full CLI
 * in-process and compare reports byte for byte.
 */
struct RunResult {
  int exit_code = 0;
  std::string out;  // report payload (stdout)
  std::string err;  // diagnostics and human-oriented tables (stderr)
};

RunResult run_command(const std::vector<std::string>& args);

}  // namespace m2o

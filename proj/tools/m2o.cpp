#include <cstdio>
#include <string>
#include <vector>

#include "m2o/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const m2o::RunResult result = m2o::run_command(args);
  if (!result.out.empty()) std::fwrite(result.out.data(), 1, result.out.size(), stdout);
  if (!result.err.empty()) std::fwrite(result.err.data(), 1, result.err.size(), stderr);
  return result.exit_code;
}

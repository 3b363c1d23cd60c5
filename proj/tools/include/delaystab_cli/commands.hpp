#pragma once

// Subcommands of the `delaystab` tool. Each returns the process exit code:
//   0 success / Certified, 1 NotCertified or a failed check, 2 parse or config
//   error, 3 periodic solver did not converge, 4 refused (model not
//   certified, no --force), 5 simulation diverged or a hypothesis failed.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "delaystab/state.hpp"

namespace delaystab::cli {

enum ExitCode : int {
  kOk = 0,
  kNotCertified = 1,
  kCheckFailed = 1,
  kParseError = 2,
  kNoConvergence = 3,
  kRefused = 4,
  kDiverged = 5,
};

struct RunConfig {
  std::filesystem::path model_path;
  Step horizon = 500;
  double tol = 1e-10;
  std::size_t max_iters = 500;
  std::vector<std::string> seeds;
  std::vector<std::string> seed_pairs;
  std::size_t random_pairs = 0;
  std::filesystem::path output = "out";
  std::string format = "csv";  // csv | json
  bool force = false;
  bool plot_script = false;
};

int cmd_certify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_periodic(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify_bounds(const RunConfig& config, std::ostream& out, std::ostream& err);
/// certify -> periodic -> verify-bounds -> convergence on the bundled model.
int cmd_example(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace delaystab::cli

#pragma once

#include <iosfwd>

#include "nilflow_io/config.hpp"
#include "nilflow_io/output.hpp"

namespace nilflow::io {

enum ExitCode : int { kOk = 0, kFailed = 1, kConfig = 2, kNumeric = 3, kIo = 4 };

struct RunResult {
  Table table;
  // oracle-check sets this when a suite fails; everything else leaves it true.
  bool all_passed = true;
};

RunResult run_experiment(const ExperimentConfig& cfg);

// Runs, writes the artifact (cfg.out or `out`), and maps exceptions to exit
// codes. Errors go to `err` as one JSON line {"error": class, "message": ...}.
int run_and_write(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

// Exit code for the exception currently being handled.
int exit_code_for_current_exception(std::ostream& err);

}  // namespace nilflow::io

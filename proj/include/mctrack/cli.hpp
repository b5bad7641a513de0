#pragma once

namespace mctrack {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitIo = 3,
  kExitInsufficientFrames = 4,
};

/// Entry point of the `mctrack` tool: track, eval, synth and benchmark.
int run_cli(int argc, const char* const* argv);

}  // namespace mctrack

#pragma once

#include <string>
#include <vector>

namespace testsupport {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed or not started
  std::string out;
  std::string err;
  bool timed_out = false;
};

/// Runs `argv` with `input` on stdin and collects both output streams.
ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input = "",
                          int timeout_ms = 10000);

}  // namespace testsupport

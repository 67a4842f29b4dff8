#pragma once

namespace fidsim {

/// Full command-line driver. Returns the process exit code: 0 on success,
/// 2 for configuration or usage errors, 1 for runtime failures.
int cli_main(int argc, const char* const* argv);

}  // namespace fidsim

#pragma once

#include <iosfwd>

namespace linforget {

/// Entry point behind the `linforget` binary; exposed so tests can drive the
/// command surface in-process. Returns the process exit status: 0 success,
/// 1 usage or I/O error, 2 oracle-threshold failure.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace linforget

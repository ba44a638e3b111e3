#pragma once

#include <ostream>

namespace opasim {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitPhysics = 2;
inline constexpr int kExitIo = 3;

/// Entry point for the opasim command line; returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace opasim

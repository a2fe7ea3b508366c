#pragma once

#include <iosfwd>

namespace unireg::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;     // unexpected failure
inline constexpr int kExitInput = 2;        // bad flags, config or input data
inline constexpr int kExitMismatch = 3;     // oracle mismatch or failed invariant
inline constexpr int kExitConvergence = 4;  // solver did not converge

/// Runs the command line tool. Standard input, output and error are passed in
/// so tests can drive it in-process.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace unireg::cli

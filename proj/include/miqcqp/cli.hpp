#pragma once

#include <iosfwd>

namespace miqcqp {

/// Exit codes of the command-line front end.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int io_failure = 1;
inline constexpr int bad_flags = 2;
inline constexpr int solver_failure = 3;
inline constexpr int node_limit = 4;
inline constexpr int box_too_large = 5;
}  // namespace exit_code

/// Subcommands gen, bound, solve and oracle. Machine-readable results go to
/// out, progress and diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace miqcqp

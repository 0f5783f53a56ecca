#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace remixgraph::cli {

enum ExitCode : int {
    Ok = 0,
    IoFailure = 1,
    DataError = 2,
    EmptyPopulation = 3,
    Usage = 64,
};

struct Context {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    /// Value of REMIXGRAPH_THREADS, if set.
    std::optional<std::string> threads_env;
};

/// Runs the command line `args` (without the program name) and returns the
/// process exit code. "-" as a path means the context's in/out stream.
int run(const std::vector<std::string>& args, Context& ctx);

} // namespace remixgraph::cli

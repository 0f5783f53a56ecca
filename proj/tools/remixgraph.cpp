#include <cstdlib>
#include <iostream>

#include "remixgraph/cli.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    std::vector<std::string> args(argv + 1, argv + argc);

    remixgraph::cli::Context ctx{std::cin, std::cout, std::cerr, std::nullopt};
    if (const char* threads = std::getenv("REMIXGRAPH_THREADS")) ctx.threads_env = threads;

    const int code = remixgraph::cli::run(args, ctx);
    std::cout.flush();
    return code;
}

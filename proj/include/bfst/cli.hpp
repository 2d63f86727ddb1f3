#ifndef BFST_CLI_HPP
#define BFST_CLI_HPP

#include <string>
#include <vector>

namespace bfst {

// Command-line entry point.  Subcommands: train, compile, tag, eval, stats,
// sample.  Exit status: 0 success, 1 usage error, 2 construction budget
// exceeded ("not computable"), 3 I/O or parse error.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args); // args without argv[0]

} // namespace bfst

#endif

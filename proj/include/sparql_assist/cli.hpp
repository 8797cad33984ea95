#pragma once

#include <iosfwd>

namespace sparql_assist {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // I/O or network
inline constexpr int kExitUsage = 2;

// Entry point of the `sparql-assist` tool. Subcommands: complete, examples,
// schema, probe, serve.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            std::istream& in);

}  // namespace sparql_assist

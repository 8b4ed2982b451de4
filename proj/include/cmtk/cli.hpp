#pragma once

// Command-line front end: a parsed Command is routed to the library operation and produces a
// JSON report plus an exit code (0 pass, 1 fail, 2 inconclusive or partial, 3 usage or I/O error).

#include "cmtk/serialize.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cmtk {

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_inconclusive = 2, exit_usage = 3 };

int exit_code(Verdict v);

struct Command {
    std::string name;                  // subcommand
    std::optional<std::string> which;  // cm|ca for invert and decompose, fit|eval for newton
    std::vector<std::string> inputs;
    std::optional<Index> depth;
    std::optional<double> tol;
    std::optional<Index> grid;
    std::vector<double> c;
    std::optional<std::string> kind;
    std::optional<std::string> builtin;  // name, "constant:<c>" or "exp-of-neg:<name>"
    std::optional<Mode> mode;
    std::vector<double> at;              // evaluation points
    std::vector<double> alpha;           // lattice spacings
    std::optional<Index> n;              // iterate count, terms, truncation N or n_max
    std::optional<std::string> op;
    std::optional<double> bound;         // sub-affinity bound M
    bool unit_limit = false;
    bool meta = true;
    std::optional<std::string> out;
};

struct DispatchResult {
    int code = exit_usage;
    Json report;          // written for codes 0-2
    std::string message;  // diagnostic for code 3
};

/// Routes to the named operation; never throws for library or input errors.
DispatchResult dispatch(const Command& cmd);

/// Resolves --builtin specs: a built-in name, "constant:<c>" (g = e^c) or "exp-of-neg:<name>".
FunctionHandle resolve_builtin(const std::string& spec);

/// Reals from "p/q", integers or decimals; throws ParseError naming `what`.
double parse_real_text(const std::string& text, const std::string& what);

/// Parses argv, dispatches and writes the report to --out or `out`; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cmtk

#pragma once

#include "bmt/digraph.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace bmt::cli {

/// Runs one command line (without the program name). Returns the exit
/// code: 0 on success, 1 on invalid input or a failed check, 2 when a cap
/// or budget refuses the request.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// An existing file in the digraph text format, otherwise a family spec
/// such as "complete:5"; `n` fills in N for specs that use it.
Digraph load_graph(const std::string& source, std::optional<int> n = std::nullopt);

/// "4,8,16", "1..4", or a mix such as "2,4..6".
std::vector<int> parse_int_list(const std::string& text);

/// Exhaustive small-universe invariant checks; one line per check.
/// Returns true when all pass.
bool selftest(std::ostream& out);

}  // namespace bmt::cli

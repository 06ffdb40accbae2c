#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mapcheck::cli {

// Runs one command-line invocation (without the program name). Human output
// goes to `out`, diagnostics to `err`.
//
// Exit codes: 0 success / contained / equivalent / homomorphism found;
// 1 not contained, not equivalent, homomorphism absent, invalid mapping;
// 2 inconclusive; 3 input or parse error; 4 chase budget exhausted.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mapcheck::cli

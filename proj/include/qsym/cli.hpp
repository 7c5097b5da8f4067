#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qsym {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInvariant = 3;

// Runs the command line (arguments without the program name).  The result
// JSON goes to `out`; the run manifest and diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qsym

#pragma once

#include <cstdint>
#include <string>

namespace qsym::diagnostics {

// Process-wide tallies of the runtime invariant checks.  Checks that fail
// also throw, so the violation count is mostly useful to harnesses that catch
// and continue.
struct Counters {
    std::uint64_t norm_checks = 0;
    std::uint64_t sortedness_checks = 0;
    std::uint64_t totality_checks = 0;
    std::uint64_t ancilla_checks = 0;
    std::uint64_t violations = 0;
};

Counters snapshot();
void reset();

void count_norm_check();
void count_sortedness_check();
void count_totality_check(std::uint64_t n = 1);
void count_ancilla_check();
void count_violation();

// Throws InvariantError after recording the violation.
[[noreturn]] void fail(const std::string& message);

} // namespace qsym::diagnostics

#include "qsym/diagnostics.hpp"

#include <atomic>
#include <sstream>

#include "qsym/errors.hpp"

namespace qsym {

std::string to_string(const IntList& values) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << values[i];
    }
    os << ')';
    return os.str();
}

namespace diagnostics {
namespace {

std::atomic<std::uint64_t> g_norm{0};
std::atomic<std::uint64_t> g_sorted{0};
std::atomic<std::uint64_t> g_total{0};
std::atomic<std::uint64_t> g_ancilla{0};
std::atomic<std::uint64_t> g_violations{0};

} // namespace

Counters snapshot() {
    return {g_norm.load(), g_sorted.load(), g_total.load(), g_ancilla.load(), g_violations.load()};
}

void reset() {
    g_norm = 0;
    g_sorted = 0;
    g_total = 0;
    g_ancilla = 0;
    g_violations = 0;
}

void count_norm_check() { g_norm.fetch_add(1, std::memory_order_relaxed); }
void count_sortedness_check() { g_sorted.fetch_add(1, std::memory_order_relaxed); }
void count_totality_check(std::uint64_t n) { g_total.fetch_add(n, std::memory_order_relaxed); }
void count_ancilla_check() { g_ancilla.fetch_add(1, std::memory_order_relaxed); }
void count_violation() { g_violations.fetch_add(1, std::memory_order_relaxed); }

void fail(const std::string& message) {
    count_violation();
    throw InvariantError(message);
}

} // namespace diagnostics
} // namespace qsym

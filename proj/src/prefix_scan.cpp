#include "qsym/prefix_scan.hpp"

#include <algorithm>
#include <bit>

namespace qsym {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t ceil_log2(std::size_t n) { return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1)); }

void check_entries(std::span<const Value> d) {
    for (Value v : d)
        if (v < 0) throw ValidationError("prefix sums need non-negative entries");
}

DepthReport scan_cost(std::size_t n, unsigned width) {
    DepthReport r;
    for (std::size_t block = 2; block <= n; block *= 2) r.elementary_layers += d_step_layers(block);
    // Fan-out copies of the middle value, at most n/2 registers at a time.
    r.ancilla_qubits = (n / 2) * width;
    return r;
}

} // namespace

unsigned scan_width(std::size_t n, Value max_entry) {
    const auto total = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(std::max<Value>(max_entry, 0));
    return static_cast<unsigned>(std::bit_width(total)) + 1;
}

void d_step(std::span<Value> d, std::size_t h, std::size_t t, unsigned width) {
    if (h < 1 || t > d.size() || h > t) throw ValidationError("D(h,t) indices out of range");
    if (h == t) return;
    const std::size_t mid = (h + t) / 2;
    const Value limit = width >= 63 ? INT64_MAX : (Value{1} << width);
    for (std::size_t i = mid + 1; i <= t; ++i) {
        const Value sum = d[i - 1] + d[mid - 1];
        if (sum >= limit)
            throw ValidationError("prefix sum overflows a " + std::to_string(width) + "-bit register");
        d[i - 1] = sum;
    }
}

void d_step_inverse(std::span<Value> d, std::size_t h, std::size_t t) {
    if (h < 1 || t > d.size() || h > t) throw ValidationError("D(h,t) indices out of range");
    if (h == t) return;
    const std::size_t mid = (h + t) / 2;
    for (std::size_t i = mid + 1; i <= t; ++i) d[i - 1] -= d[mid - 1];
}

std::size_t d_step_layers(std::size_t block) {
    if (block < 2) return 0;
    return 2 * ceil_log2(block / 2) + 1;
}

void prefix_sums_in_place(std::span<Value> d, unsigned width, DepthReport* depth) {
    const std::size_t n = d.size();
    if (n == 0) return;
    if (!is_pow2(n)) throw ValidationError("prefix sums need a power-of-two length");
    check_entries(d);
    for (std::size_t block = 2; block <= n; block *= 2)
        for (std::size_t j = 0; j < n / block; ++j) d_step(d, j * block + 1, (j + 1) * block, width);
    add_depth(depth, scan_cost(n, width));
}

void unprefix_sums_in_place(std::span<Value> d, DepthReport* depth) {
    const std::size_t n = d.size();
    if (n == 0) return;
    if (!is_pow2(n)) throw ValidationError("prefix sums need a power-of-two length");
    for (std::size_t block = n; block >= 2; block /= 2)
        for (std::size_t j = 0; j < n / block; ++j) d_step_inverse(d, j * block + 1, (j + 1) * block);
    Value mx = 0;
    for (Value v : d) mx = std::max(mx, v);
    add_depth(depth, scan_cost(n, scan_width(n, mx)));
}

IntList prefix_sums(std::span<const Value> d, DepthReport* depth) {
    std::size_t n = 1;
    while (n < d.size()) n *= 2;
    IntList buf(n, 0);
    std::copy(d.begin(), d.end(), buf.begin());
    check_entries(buf);
    Value mx = 0;
    for (Value v : buf) mx = std::max(mx, v);
    if (d.empty()) return {};
    prefix_sums_in_place(buf, scan_width(n, mx), depth);
    buf.resize(d.size());
    return buf;
}

IntList unprefix_sums(std::span<const Value> d, DepthReport* depth) {
    if (d.empty()) return {};
    std::size_t n = 1;
    while (n < d.size()) n *= 2;
    // Padding continues the last prefix value so the padded tail unprefixes to 0.
    IntList buf(n, d.back());
    std::copy(d.begin(), d.end(), buf.begin());
    unprefix_sums_in_place(buf, depth);
    buf.resize(d.size());
    return buf;
}

} // namespace qsym

#include "qsym/duplicates.hpp"

#include <algorithm>

#include "qsym/layout.hpp"
#include "qsym/permutation.hpp"

namespace qsym {

namespace {

struct BlockCounts {
    Value head = 1;  // elements equal to the block's first value
    Value tail = 1;  // elements equal to the block's last value
};

} // namespace

DepthReport duplicate_detection_cost(std::size_t n) {
    std::size_t padded = 1, levels = 0;
    while (padded < n) {
        padded *= 2;
        ++levels;
    }
    DepthReport d;
    // Per block: two equality tests, one conditional add per output, one
    // conditional write into dup.
    d.elementary_layers = 4 * levels + 2;
    d.ancilla_qubits = 2 * padded * element_width(static_cast<Value>(padded) + 1);
    return d;
}

IntList detect_duplicates(std::span<const Value> nsil, DepthReport* depth) {
    require_nsil(nsil);
    const std::size_t n = nsil.size();
    IntList dup(n, 0);
    if (n == 0) return dup;
    std::size_t padded = 1;
    while (padded < n) padded *= 2;
    // Padding with a value above the maximum terminates the last real run.
    IntList l(nsil.begin(), nsil.end());
    l.resize(padded, nsil.back() + 1);
    IntList dup_padded(padded, 0);

    // 1-based helpers matching the block layout [h, t].
    auto L = [&](std::size_t i) { return l[i - 1]; };
    auto record = [&](std::size_t i, Value count) {
        if (i <= n) dup_padded[i - 1] = count;
    };

    std::vector<BlockCounts> level(padded);
    for (std::size_t size = 2; size <= padded; size *= 2) {
        std::vector<BlockCounts> next(padded / size);
        const double child = static_cast<double>(size) / 2.0;
        for (std::size_t b = 0; b < padded / size; ++b) {
            const std::size_t h1 = b * size + 1, t2 = (b + 1) * size;
            const std::size_t t1 = (h1 + t2) / 2, h2 = t1 + 1;
            const BlockCounts left = level[2 * b], right = level[2 * b + 1];
            BlockCounts out;
            if (L(t1) == L(h2)) {
                const bool left_full = L(t1) == L(h1), right_full = L(h2) == L(t2);
                if (!left_full && !right_full) {
                    record(t1 - static_cast<std::size_t>(left.tail) + 1, left.tail + right.head);
                    out = {left.head, right.tail};
                } else if (!left_full) {
                    out = {left.head, right.tail + left.tail};
                } else if (!right_full) {
                    out = {left.head + right.head, right.tail};
                } else {
                    out = {left.head + right.head, left.head + right.head};
                }
            } else {
                out = {left.head, right.tail};
                if (left.tail > 1 && static_cast<double>(left.tail) < child)
                    record(t1 - static_cast<std::size_t>(left.tail) + 1, left.tail);
                if (right.head > 1 && static_cast<double>(right.head) < child) record(h2, right.head);
            }
            next[b] = out;
        }
        level = std::move(next);
    }
    // The run at the very front, and a run reaching the very end of an
    // unpadded list, never get a closing neighbour inside the tree.
    const BlockCounts root = level.front();
    if (root.head > 1) record(1, std::min<Value>(root.head, static_cast<Value>(n)));
    if (padded == n && root.tail > 1 && root.tail < static_cast<Value>(n))
        record(n - static_cast<std::size_t>(root.tail) + 1, root.tail);

    std::copy(dup_padded.begin(), dup_padded.begin() + static_cast<std::ptrdiff_t>(n), dup.begin());
    add_depth(depth, duplicate_detection_cost(n));
    return dup;
}

IntList run_starts_from_dup(std::span<const Value> dup) {
    const std::size_t n = dup.size();
    IntList start(n);
    std::size_t i = 0;
    while (i < n) {
        const Value len = dup[i];
        if (len < 0 || static_cast<std::size_t>(len) > n - i)
            throw ValidationError("dup vector entry out of range at position " + std::to_string(i));
        const std::size_t run = len > 1 ? static_cast<std::size_t>(len) : 1;
        for (std::size_t k = i; k < i + run; ++k) {
            if (k > i && dup[k] != 0) throw ValidationError("dup vector has overlapping runs");
            start[k] = static_cast<Value>(i);
        }
        i += run;
    }
    return start;
}

} // namespace qsym

#pragma once

#include <functional>
#include <span>
#include <string>
#include <tuple>

#include "qsym/errors.hpp"

namespace qsym {

// A total order on integer tuples of fixed arity.  compare(a, b) < 0 means
// a comes first in the order; 0 only for equal tuples.
class ComparisonRule {
public:
    using Compare = std::function<int(std::span<const Value>, std::span<const Value>)>;

    ComparisonRule(std::string name, std::size_t arity, Compare compare);

    const std::string& name() const { return name_; }
    std::size_t arity() const { return arity_; }

    int compare(std::span<const Value> a, std::span<const Value> b) const;
    bool less(std::span<const Value> a, std::span<const Value> b) const { return compare(a, b) < 0; }
    bool greater(std::span<const Value> a, std::span<const Value> b) const { return compare(a, b) > 0; }

    // True for the scalar natural order, which gate kernels special-case.
    bool is_scalar_ascending() const { return scalar_ascending_; }

private:
    friend ComparisonRule ascending(std::size_t);
    std::string name_;
    std::size_t arity_;
    Compare compare_;
    bool scalar_ascending_ = false;
};

struct ComparatorResult {
    IntList low, high;
    int bit = 0;
};

// One comparator: returns the ordered pair and the record bit [a > b].
ComparatorResult comparator(std::span<const Value> a, std::span<const Value> b, const ComparisonRule& rule);

// Lexicographic natural order.
ComparisonRule ascending(std::size_t arity = 1);
// Odd values first, then by value.
ComparisonRule odd_before_even();
// Appends a position tag as the last component and breaks ties on it.
ComparisonRule stabilized(const ComparisonRule& base);
// Diagram entries (r, c): by row, then column.
ComparisonRule row_order();

// Rules on indexed diagram triples (idx, r, c) used by the LES merge.  The
// left half is every entry with c <= column_boundary.
// concat: left half before right half, each side by row.
ComparisonRule diagram_concat(Value column_boundary);
// merge: the final row order after inserting the left diagram into the free
// rows of the right one.  `left_count` entries carry idx 1..left_count.
// Only total on well-formed merge inputs; incomparable pairs throw.
ComparisonRule diagram_merge(Value column_boundary, Value left_count);

// Rules on conversion triples (a, b, c) with mode index a and sentinel mode m.
// mode_major: by a; entries with a == m ordered by c.
ComparisonRule mode_major(Value m);
// slot_major: by c, then a, then b.
ComparisonRule slot_major();
// Mode entries (a < m) interleaved with new entries (a == m): a new entry
// with b <= a precedes mode a.  New entries ordered by (b, c).
ComparisonRule mode_interleave(Value m);

namespace order {

// Diagram triples are (idx, r, c).
inline int concat_compare(const Value* x, const Value* y, Value boundary) {
    const Value kx[4] = {x[2] > boundary, x[1], x[0], x[2]};
    const Value ky[4] = {y[2] > boundary, y[1], y[0], y[2]};
    for (int i = 0; i < 4; ++i)
        if (kx[i] != ky[i]) return kx[i] < ky[i] ? -1 : 1;
    return 0;
}

// x before y in the merged diagram:
//  same side: smaller idx first;
//  x left, y right: r_x + rank_y <= r_y, with rank_y = idx_y - left_count;
//  x right, y left: r_y + rank_x > r_x.
// The two cross cases are complements, so each cross pair is decided once.
inline bool merge_before(const Value* x, const Value* y, Value boundary, Value left_count) {
    const bool xl = x[2] <= boundary, yl = y[2] <= boundary;
    if (xl == yl) return x[0] < y[0];
    if (xl) return x[1] + (y[0] - left_count) <= y[1];
    return y[1] + (x[0] - left_count) > x[1];
}

} // namespace order

} // namespace qsym

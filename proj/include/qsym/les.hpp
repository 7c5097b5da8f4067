#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qsym/depth.hpp"
#include "qsym/permutation.hpp"

namespace qsym {

// Lower exceeding sequence: 1 <= s_i <= i.
using Les = IntList;

bool is_les(std::span<const Value> s);
void require_les(std::span<const Value> s);

// s_i = #{ j <= i : sigma^{-1}(j) <= sigma^{-1}(i) }.
Les perm_to_les(const Permutation& sigma);

// Fills columns n..1; column j takes the s_j-th row not yet used.
Permutation les_to_perm_naive(std::span<const Value> s);

// One filled block of the permutation diagram: row r holds column c.
struct DiagramEntry {
    Value r = 0;
    Value c = 0;

    bool operator==(const DiagramEntry&) const = default;
};
using Diagram = std::vector<DiagramEntry>;

struct MergeTrace {
    // Indexed lists before and after the reversible re-sort, as (idx, r, c).
    std::vector<std::array<Value, 3>> indexed_before, indexed_after;
    IntList rank_left, rank_right;
};

// Inserts the left diagram (all columns smaller than the right's) into the
// free rows of the right diagram: the left entry with row r moves to the r-th
// row the right diagram leaves unused.  Both inputs are listed by row.  The
// merge runs as the reversible sort / prefix-sum chain and checks every
// intermediate invariant.
Diagram merge_diagrams(const Diagram& left, const Diagram& right, DepthReport* depth = nullptr,
                       MergeTrace* trace = nullptr);

// Divide-and-conquer conversion by repeated merges (length padded to a power
// of two with s_i = i).
Permutation les_to_perm_parallel(std::span<const Value> s, DepthReport* depth = nullptr);

// Resources of les_to_perm_parallel for length n (the merges of one level run
// side by side).
DepthReport les_to_perm_cost(std::size_t n);

// LES_l: s_i ranges over [start of i's run, i] (1-based).  Its images under
// the bijection are exactly the stabilizer H_l.
struct LesRange {
    IntList lo, hi;  // inclusive, 1-based
    std::uint64_t count() const;
};
LesRange les_family_range(std::span<const Value> nsil);
// Visits every member in lexicographic order.
void for_each_les(const LesRange& range, const std::function<void(std::span<const Value>)>& visit);
std::vector<Les> les_family(std::span<const Value> nsil);

} // namespace qsym

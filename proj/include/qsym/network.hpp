#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qsym/comparison.hpp"
#include "qsym/depth.hpp"
#include "qsym/permutation.hpp"

namespace qsym {

// 0-based positions i < j; the comparator puts the smaller element at i.
struct Comparator {
    std::size_t i = 0;
    std::size_t j = 0;

    bool operator==(const Comparator&) const = default;
};

class SortingNetwork {
public:
    SortingNetwork() = default;
    SortingNetwork(std::size_t width, std::vector<std::vector<Comparator>> layers);

    std::size_t width() const { return width_; }
    const std::vector<std::vector<Comparator>>& layers() const { return layers_; }
    std::size_t depth() const { return layers_.size(); }
    std::size_t comparator_count() const { return count_; }
    // Comparators in record order (layer by layer).
    const std::vector<Comparator>& flat() const { return flat_; }

    DepthReport cost() const;

private:
    std::size_t width_ = 0;
    std::vector<std::vector<Comparator>> layers_;
    std::vector<Comparator> flat_;
    std::size_t count_ = 0;
};

enum class NetworkKind { bitonic, bubble };

SortingNetwork build_bubble(std::size_t n);
// Bitonic network for the next power of two, with every comparator that
// touches a padding position removed (padding holds +infinity and never moves).
SortingNetwork build_bitonic(std::size_t n);
SortingNetwork build_network(NetworkKind kind, std::size_t n);
// Shared immutable instance; built once per (kind, n).
std::shared_ptr<const SortingNetwork> cached_network(NetworkKind kind, std::size_t n);

NetworkKind parse_network_kind(std::string_view name);
const char* network_kind_name(NetworkKind kind);

inline constexpr std::size_t kMaxTupleArity = 4;

// Strided view of a list of tuples: component c of element i lives at
// comp[c][i * stride].
struct TupleView {
    std::array<Value*, kMaxTupleArity> comp{};
    std::size_t arity = 1;
    std::size_t stride = 1;
    std::size_t size = 0;

    Value& at(std::size_t i, std::size_t c) const { return comp[c][i * stride]; }
    void swap(std::size_t i, std::size_t j) const {
        for (std::size_t c = 0; c < arity; ++c) std::swap(at(i, c), at(j, c));
    }
    std::array<Value, kMaxTupleArity> get(std::size_t i) const {
        std::array<Value, kMaxTupleArity> t{};
        for (std::size_t c = 0; c < arity; ++c) t[c] = at(i, c);
        return t;
    }
};

// Contiguous tuple-major storage (element i occupies flat[i*k .. i*k+k)).
TupleView tuple_view(std::span<Value> flat, std::size_t arity);

// Returns a predicate greater(i, j) over positions of `view`.
inline auto greater_on(const TupleView& view, const ComparisonRule& rule) {
    return [view, &rule](std::size_t i, std::size_t j) {
        if (rule.is_scalar_ascending()) return view.at(i, 0) > view.at(j, 0);
        const auto a = view.get(i), b = view.get(j);
        return rule.greater(std::span<const Value>(a.data(), view.arity), std::span<const Value>(b.data(), view.arity));
    };
}

// Gate kernels.  `record` has one 0/1 entry per comparator in record order.
// SORT: bit ^= [x_i > x_j]; swap if bit.
template <class Greater>
void sort_gates(const SortingNetwork& net, const TupleView& v, Value* record, Greater&& greater) {
    const auto& f = net.flat();
    for (std::size_t k = 0; k < f.size(); ++k) {
        Value& bit = record[k];
        bit ^= greater(f[k].i, f[k].j) ? 1 : 0;
        if (bit) v.swap(f[k].i, f[k].j);
    }
}

// UNSORT: exact inverse of SORT, gates in reverse.
template <class Greater>
void unsort_gates(const SortingNetwork& net, const TupleView& v, Value* record, Greater&& greater) {
    const auto& f = net.flat();
    for (std::size_t k = f.size(); k-- > 0;) {
        Value& bit = record[k];
        if (bit) v.swap(f[k].i, f[k].j);
        bit ^= greater(f[k].i, f[k].j) ? 1 : 0;
    }
}

// SHUFFLE: the controlled swaps of UNSORT only.
inline void shuffle_gates(const SortingNetwork& net, const TupleView& v, const Value* record) {
    const auto& f = net.flat();
    for (std::size_t k = f.size(); k-- > 0;)
        if (record[k]) v.swap(f[k].i, f[k].j);
}

// UNSHUFFLE: the controlled swaps of SORT only.
inline void unshuffle_gates(const SortingNetwork& net, const TupleView& v, const Value* record) {
    const auto& f = net.flat();
    for (std::size_t k = 0; k < f.size(); ++k)
        if (record[k]) v.swap(f[k].i, f[k].j);
}

// REVSORT chain on a view with explicit order predicates (source_gt,
// target_gt are greater(i, j) over positions of `data`).  `rec2`, `rec3`
// hold comparator_count zeros and `idx` holds 1..n on entry; they are
// returned to that state when the input was source-sorted with distinct
// elements.
template <class SourceGreater, class TargetGreater>
void revsort_kernel(const SortingNetwork& net, const TupleView& data, SourceGreater&& source_gt,
                    TargetGreater&& target_gt, Value* rec2, Value* rec3, Value* idx) {
    TupleView index;
    index.comp[0] = idx;
    index.size = data.size;
    auto index_gt = [idx](std::size_t i, std::size_t j) { return idx[i] > idx[j]; };
    sort_gates(net, data, rec2, target_gt);
    sort_gates(net, data, rec3, source_gt);
    unsort_gates(net, index, rec2, index_gt);
    shuffle_gates(net, index, rec3);
    unsort_gates(net, data, rec3, source_gt);
}

// Classical helpers on plain lists.
struct SortOutcome {
    IntList sorted;
    IntList record;
};
// Sorts tuple-major `list` (arity from the rule) and returns the record.
SortOutcome sort_with_record(const SortingNetwork& net, const ComparisonRule& rule, std::span<const Value> list);
// rec(sigma): the record of sorting sigma(12...n).
IntList record_of(const SortingNetwork& net, const Permutation& sigma);
IntList unsort_with_record(const SortingNetwork& net, const ComparisonRule& rule, std::span<const Value> list,
                           IntList& record);
IntList shuffle_with_record(const SortingNetwork& net, std::span<const Value> list, std::span<const Value> record,
                            std::size_t arity = 1);
IntList unshuffle_with_record(const SortingNetwork& net, std::span<const Value> list, std::span<const Value> record,
                              std::size_t arity = 1);

// Classical REVSORT: re-sorts a source-sorted tuple list under `target`
// through the five-step chain, using and cleaning three ancilla arrays.
// Throws ValidationError if the input is not source-sorted and InvariantError
// if an ancilla is left dirty.
IntList revsort(const SortingNetwork& net, const ComparisonRule& source, const ComparisonRule& target,
                std::span<const Value> list, DepthReport* depth = nullptr);

// In-place form on a view.  Scratch arrays are provided by the caller
// (2 * comparator_count + width values).
void revsort_in_place(const SortingNetwork& net, const ComparisonRule& source, const ComparisonRule& target,
                      const TupleView& data, std::span<Value> scratch);

bool is_sorted_under(const TupleView& data, const ComparisonRule& rule);

} // namespace qsym

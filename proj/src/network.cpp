#include "qsym/network.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include "qsym/diagnostics.hpp"
#include "qsym/layout.hpp"

namespace qsym {

SortingNetwork::SortingNetwork(std::size_t width, std::vector<std::vector<Comparator>> layers)
    : width_(width), layers_(std::move(layers)) {
    for (const auto& layer : layers_) {
        std::vector<bool> used(width_, false);
        for (const auto& c : layer) {
            if (c.i >= c.j || c.j >= width_) throw ValidationError("comparator out of range");
            if (used[c.i] || used[c.j]) throw ValidationError("comparators within a layer must be disjoint");
            used[c.i] = used[c.j] = true;
            flat_.push_back(c);
        }
    }
    count_ = flat_.size();
}

DepthReport SortingNetwork::cost() const {
    DepthReport d;
    d.comparator_layers = layers_.size();
    d.ancilla_qubits = count_;
    return d;
}

SortingNetwork build_bubble(std::size_t n) {
    std::vector<std::vector<Comparator>> layers;
    for (std::size_t pass = 0; pass + 1 < n; ++pass)
        for (std::size_t i = 0; i + 1 < n - pass; ++i) layers.push_back({{i, i + 1}});
    return SortingNetwork(n, std::move(layers));
}

SortingNetwork build_bitonic(std::size_t n) {
    std::size_t N = 1;
    while (N < n) N *= 2;
    std::vector<std::vector<Comparator>> layers;
    auto keep = [n](std::size_t i, std::size_t j) { return i < n && j < n; };
    for (std::size_t k = 2; k <= N; k *= 2) {
        // Merge step against the mirrored half, so every comparator ascends.
        std::vector<Comparator> first;
        for (std::size_t b = 0; b < N; b += k)
            for (std::size_t i = 0; i < k / 2; ++i)
                if (keep(b + i, b + k - 1 - i)) first.push_back({b + i, b + k - 1 - i});
        if (!first.empty()) layers.push_back(std::move(first));
        for (std::size_t j = k / 4; j >= 1; j /= 2) {
            std::vector<Comparator> layer;
            for (std::size_t b = 0; b < N; b += 2 * j)
                for (std::size_t i = b; i < b + j; ++i)
                    if (keep(i, i + j)) layer.push_back({i, i + j});
            if (!layer.empty()) layers.push_back(std::move(layer));
        }
    }
    return SortingNetwork(n, std::move(layers));
}

SortingNetwork build_network(NetworkKind kind, std::size_t n) {
    return kind == NetworkKind::bubble ? build_bubble(n) : build_bitonic(n);
}

std::shared_ptr<const SortingNetwork> cached_network(NetworkKind kind, std::size_t n) {
    static std::mutex mu;
    static std::map<std::pair<int, std::size_t>, std::shared_ptr<const SortingNetwork>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{static_cast<int>(kind), n}];
    if (!slot) slot = std::make_shared<const SortingNetwork>(build_network(kind, n));
    return slot;
}

NetworkKind parse_network_kind(std::string_view name) {
    if (name == "bitonic") return NetworkKind::bitonic;
    if (name == "bubble") return NetworkKind::bubble;
    throw ValidationError("unknown network '" + std::string(name) + "' (expected bitonic or bubble)");
}

const char* network_kind_name(NetworkKind kind) { return kind == NetworkKind::bubble ? "bubble" : "bitonic"; }

TupleView tuple_view(std::span<Value> flat, std::size_t arity) {
    if (arity == 0 || arity > kMaxTupleArity) throw ValidationError("unsupported tuple arity");
    if (flat.size() % arity != 0) throw ValidationError("list length is not a multiple of the tuple arity");
    TupleView v;
    v.arity = arity;
    v.stride = arity;
    v.size = flat.size() / arity;
    for (std::size_t c = 0; c < arity; ++c) v.comp[c] = flat.data() + c;
    return v;
}

namespace {

void check_width(const SortingNetwork& net, std::size_t size) {
    if (net.width() != size)
        throw ValidationError("network of width " + std::to_string(net.width()) + " applied to " +
                              std::to_string(size) + " elements");
}

void check_record(const SortingNetwork& net, std::span<const Value> record) {
    if (record.size() != net.comparator_count())
        throw ValidationError("record has " + std::to_string(record.size()) + " bits, network has " +
                              std::to_string(net.comparator_count()) + " comparators");
    for (Value b : record)
        if (b != 0 && b != 1) throw ValidationError("record bits must be 0 or 1");
}

} // namespace

SortOutcome sort_with_record(const SortingNetwork& net, const ComparisonRule& rule, std::span<const Value> list) {
    SortOutcome out{IntList(list.begin(), list.end()), IntList(net.comparator_count(), 0)};
    auto view = tuple_view(out.sorted, rule.arity());
    check_width(net, view.size);
    sort_gates(net, view, out.record.data(), greater_on(view, rule));
    return out;
}

IntList record_of(const SortingNetwork& net, const Permutation& sigma) {
    return sort_with_record(net, ascending(), sigma.image()).record;
}

IntList unsort_with_record(const SortingNetwork& net, const ComparisonRule& rule, std::span<const Value> list,
                           IntList& record) {
    check_record(net, record);
    IntList data(list.begin(), list.end());
    auto view = tuple_view(data, rule.arity());
    check_width(net, view.size);
    unsort_gates(net, view, record.data(), greater_on(view, rule));
    return data;
}

IntList shuffle_with_record(const SortingNetwork& net, std::span<const Value> list, std::span<const Value> record,
                            std::size_t arity) {
    check_record(net, record);
    IntList data(list.begin(), list.end());
    auto view = tuple_view(data, arity);
    check_width(net, view.size);
    shuffle_gates(net, view, record.data());
    return data;
}

IntList unshuffle_with_record(const SortingNetwork& net, std::span<const Value> list, std::span<const Value> record,
                              std::size_t arity) {
    check_record(net, record);
    IntList data(list.begin(), list.end());
    auto view = tuple_view(data, arity);
    check_width(net, view.size);
    unshuffle_gates(net, view, record.data());
    return data;
}

bool is_sorted_under(const TupleView& data, const ComparisonRule& rule) {
    diagnostics::count_sortedness_check();
    auto gt = greater_on(data, rule);
    for (std::size_t i = 1; i < data.size; ++i)
        if (gt(i - 1, i)) return false;
    return true;
}

void revsort_in_place(const SortingNetwork& net, const ComparisonRule& source, const ComparisonRule& target,
                      const TupleView& data, std::span<Value> scratch) {
    check_width(net, data.size);
    const std::size_t c = net.comparator_count(), n = data.size;
    if (scratch.size() < 2 * c + n) throw ValidationError("revsort scratch too small");
    Value* rec2 = scratch.data();
    Value* rec3 = rec2 + c;
    Value* idx = rec3 + c;
    std::fill(rec2, rec2 + 2 * c, 0);
    std::iota(idx, idx + n, Value{1});
    if (!is_sorted_under(data, source)) {
        IntList flat;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < data.arity; ++k) flat.push_back(data.at(i, k));
        throw ValidationError("revsort input is not sorted under '" + source.name() + "': " + to_string(flat));
    }
    revsort_kernel(net, data, greater_on(data, source), greater_on(data, target), rec2, rec3, idx);

    diagnostics::count_ancilla_check();
    for (std::size_t k = 0; k < 2 * c; ++k)
        if (rec2[k] != 0) diagnostics::fail("revsort left a record bit set (elements not distinct?)");
    for (std::size_t i = 0; i < n; ++i)
        if (idx[i] != static_cast<Value>(i + 1)) diagnostics::fail("revsort left the index register dirty");
    if (!is_sorted_under(data, target)) diagnostics::fail("revsort output is not sorted under '" + target.name() + "'");
}

IntList revsort(const SortingNetwork& net, const ComparisonRule& source, const ComparisonRule& target,
                std::span<const Value> list, DepthReport* depth) {
    if (source.arity() != target.arity()) throw ValidationError("revsort rules have different arities");
    IntList data(list.begin(), list.end());
    auto view = tuple_view(data, source.arity());
    std::vector<Value> scratch(2 * net.comparator_count() + view.size);
    revsort_in_place(net, source, target, view, scratch);
    if (depth) {
        DepthReport d;
        d.comparator_layers = 5 * net.depth();
        d.ancilla_qubits = 2 * net.comparator_count() + view.size * element_width(static_cast<Value>(view.size) + 1);
        *depth += d;
    }
    return data;
}

} // namespace qsym

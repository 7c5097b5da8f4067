#include "qsym/comparison.hpp"

#include <algorithm>
#include <array>

#include "qsym/diagnostics.hpp"

namespace qsym {

namespace {

int sign(Value a, Value b) { return a < b ? -1 : (a > b ? 1 : 0); }

int lexicographic(std::span<const Value> a, std::span<const Value> b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (int c = sign(a[i], b[i])) return c;
    return 0;
}

// Compares sort keys component by component.
template <std::size_t N>
int by_keys(const std::array<Value, N>& x, const std::array<Value, N>& y) {
    for (std::size_t i = 0; i < N; ++i)
        if (int c = sign(x[i], y[i])) return c;
    return 0;
}

} // namespace

ComparisonRule::ComparisonRule(std::string name, std::size_t arity, Compare compare)
    : name_(std::move(name)), arity_(arity), compare_(std::move(compare)) {
    if (arity_ == 0) throw ValidationError("comparison rule needs a positive arity");
}

int ComparisonRule::compare(std::span<const Value> a, std::span<const Value> b) const {
    if (a.size() != arity_ || b.size() != arity_)
        throw ValidationError("rule '" + name_ + "' expects tuples of arity " + std::to_string(arity_));
    if (scalar_ascending_) return sign(a[0], b[0]);
    const int c = compare_(a, b);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

ComparatorResult comparator(std::span<const Value> a, std::span<const Value> b, const ComparisonRule& rule) {
    ComparatorResult r;
    r.bit = rule.greater(a, b) ? 1 : 0;
    r.low.assign(a.begin(), a.end());
    r.high.assign(b.begin(), b.end());
    if (r.bit) std::swap(r.low, r.high);
    return r;
}

ComparisonRule ascending(std::size_t arity) {
    ComparisonRule rule(arity == 1 ? "ascending" : "lexicographic", arity, lexicographic);
    rule.scalar_ascending_ = arity == 1;
    return rule;
}

ComparisonRule odd_before_even() {
    return ComparisonRule("odd_before_even", 1, [](std::span<const Value> a, std::span<const Value> b) {
        const Value pa = (a[0] % 2 != 0) ? 0 : 1;
        const Value pb = (b[0] % 2 != 0) ? 0 : 1;
        return by_keys<2>({pa, a[0]}, {pb, b[0]});
    });
}

ComparisonRule stabilized(const ComparisonRule& base) {
    const std::size_t k = base.arity();
    return ComparisonRule("stabilized(" + base.name() + ")", k + 1,
                          [base, k](std::span<const Value> a, std::span<const Value> b) {
                              if (int c = base.compare(a.first(k), b.first(k))) return c;
                              return sign(a[k], b[k]);
                          });
}

ComparisonRule row_order() { return ComparisonRule("row_order", 2, lexicographic); }

ComparisonRule diagram_concat(Value boundary) {
    return ComparisonRule("diagram_concat", 3, [boundary](std::span<const Value> x, std::span<const Value> y) {
        return order::concat_compare(x.data(), y.data(), boundary);
    });
}

ComparisonRule diagram_merge(Value boundary, Value left_count) {
    return ComparisonRule("diagram_merge", 3, [boundary, left_count](std::span<const Value> x, std::span<const Value> y) {
        diagnostics::count_totality_check();
        if (std::equal(x.begin(), x.end(), y.begin())) return 0;
        const bool xy = order::merge_before(x.data(), y.data(), boundary, left_count);
        const bool yx = order::merge_before(y.data(), x.data(), boundary, left_count);
        if (xy == yx)
            diagnostics::fail("diagram merge order is not total on " + to_string(IntList(x.begin(), x.end())) +
                              " and " + to_string(IntList(y.begin(), y.end())));
        return xy ? -1 : 1;
    });
}

ComparisonRule mode_major(Value m) {
    return ComparisonRule("mode_major", 3, [m](std::span<const Value> x, std::span<const Value> y) {
        if (int c = sign(x[0], y[0])) return c;
        if (x[0] == m) return by_keys<2>({x[2], x[1]}, {y[2], y[1]});
        return by_keys<2>({x[1], x[2]}, {y[1], y[2]});
    });
}

ComparisonRule slot_major() {
    return ComparisonRule("slot_major", 3, [](std::span<const Value> x, std::span<const Value> y) {
        return by_keys<3>({x[2], x[0], x[1]}, {y[2], y[0], y[1]});
    });
}

ComparisonRule mode_interleave(Value m) {
    // Sort key: new entries (m, b, c) -> (b, 0, c, 0); mode entries
    // (a, b, c) -> (a, 1, b, c).
    auto key = [m](std::span<const Value> t) -> std::array<Value, 4> {
        if (t[0] == m) return {t[1], 0, t[2], 0};
        return {t[0], 1, t[1], t[2]};
    };
    return ComparisonRule("mode_interleave", 3, [key](std::span<const Value> x, std::span<const Value> y) {
        return by_keys<4>(key(x), key(y));
    });
}

} // namespace qsym

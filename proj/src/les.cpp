#include "qsym/les.hpp"

#include <algorithm>
#include <numeric>

#include "qsym/diagnostics.hpp"
#include "qsym/layout.hpp"
#include "qsym/network.hpp"
#include "qsym/prefix_scan.hpp"

namespace qsym {

bool is_les(std::span<const Value> s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] < 1 || s[i] > static_cast<Value>(i + 1)) return false;
    return true;
}

void require_les(std::span<const Value> s) {
    if (!is_les(s)) throw ValidationError("not a lower exceeding sequence: " + to_string(IntList(s.begin(), s.end())));
}

Les perm_to_les(const Permutation& sigma) {
    const std::size_t n = sigma.size();
    const Permutation pos = sigma.inverse();
    Les s(n);
    for (std::size_t i = 0; i < n; ++i) {
        Value count = 0;
        for (std::size_t j = 0; j <= i; ++j)
            if (pos[j] <= pos[i]) ++count;
        s[i] = count;
    }
    return s;
}

Permutation les_to_perm_naive(std::span<const Value> s) {
    require_les(s);
    const std::size_t n = s.size();
    std::vector<bool> used(n, false);
    IntList image(n, 0);
    for (std::size_t j = n; j-- > 0;) {
        Value left = s[j];
        for (std::size_t row = 0; row < n; ++row) {
            if (used[row]) continue;
            if (--left == 0) {
                used[row] = true;
                image[row] = static_cast<Value>(j + 1);
                break;
            }
        }
    }
    return Permutation(std::move(image));
}

namespace {

std::size_t pow2_at_least(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p *= 2;
    return p;
}

DepthReport merge_cost(std::size_t total) {
    DepthReport d;
    if (total < 2) return d;
    const auto net = cached_network(NetworkKind::bitonic, total);
    const std::size_t padded = pow2_at_least(total);
    const unsigned w = scan_width(padded, 1);
    d.comparator_layers = 5 * net->depth();
    // Prefix sums of both indicator arrays run side by side, as do their
    // inverses; plus the indicator, index-erase, row-shift and indicator
    // uncompute layers.
    std::size_t scan = 0;
    for (std::size_t b = 2; b <= padded; b *= 2) scan += d_step_layers(b);
    d.elementary_layers = 2 * scan + 4;
    const unsigned idx_bits = element_width(static_cast<Value>(total) + 1);
    d.ancilla_qubits = 2 * net->comparator_count() + total * idx_bits + 2 * padded * w + total * 2;
    return d;
}

struct Workspace {
    std::vector<Value> triples, scratch, dl, dr;
};

Workspace& workspace() {
    thread_local Workspace ws;
    return ws;
}

void check_rows(std::span<const DiagramEntry> d, const char* side) {
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i].r < 1) throw ValidationError(std::string(side) + " diagram has a non-positive row");
        if (i && d[i - 1].r >= d[i].r)
            throw ValidationError(std::string(side) + " diagram is not listed by strictly increasing row");
    }
}

// The merge proper.  `out` receives left.size() + right.size() entries.
void merge_core(std::span<const DiagramEntry> left, std::span<const DiagramEntry> right, std::span<DiagramEntry> out,
                MergeTrace* trace) {
    const std::size_t kl = left.size(), kr = right.size(), n = kl + kr;
    if (kl == 0) {
        std::copy(right.begin(), right.end(), out.begin());
        return;
    }
    if (kr == 0) {
        std::copy(left.begin(), left.end(), out.begin());
        return;
    }
    Value boundary = 0;
    for (const auto& e : left) boundary = std::max(boundary, e.c);
    for (const auto& e : right)
        if (e.c <= boundary) throw ValidationError("left diagram columns must precede right diagram columns");
    const Value lcount = static_cast<Value>(kl);

    auto& ws = workspace();
    ws.triples.resize(3 * n);
    Value* t = ws.triples.data();
    for (std::size_t i = 0; i < n; ++i) {
        const DiagramEntry& e = i < kl ? left[i] : right[i - kl];
        t[3 * i] = static_cast<Value>(i + 1);
        t[3 * i + 1] = e.r;
        t[3 * i + 2] = e.c;
    }
    if (trace) {
        trace->indexed_before.clear();
        for (std::size_t i = 0; i < n; ++i) trace->indexed_before.push_back({t[3 * i], t[3 * i + 1], t[3 * i + 2]});
    }

    const auto net = cached_network(NetworkKind::bitonic, n);
    TupleView view = tuple_view(std::span<Value>(t, 3 * n), 3);
    auto concat_gt = [t, boundary](std::size_t i, std::size_t j) {
        return order::concat_compare(t + 3 * i, t + 3 * j, boundary) > 0;
    };
    auto merge_gt = [t, boundary, lcount](std::size_t i, std::size_t j) {
        const Value* x = t + 3 * i;
        const Value* y = t + 3 * j;
        const bool xy = order::merge_before(x, y, boundary, lcount);
        const bool yx = order::merge_before(y, x, boundary, lcount);
        if (xy == yx && !(x[0] == y[0] && x[1] == y[1] && x[2] == y[2]))
            diagnostics::fail("diagram merge order is not total on " + to_string({x[0], x[1], x[2]}) + " and " +
                              to_string({y[0], y[1], y[2]}));
        return yx;
    };

    diagnostics::count_sortedness_check();
    for (std::size_t i = 1; i < n; ++i)
        if (concat_gt(i - 1, i)) diagnostics::fail("indexed diagram list is not in concatenation order");

    const std::size_t c = net->comparator_count();
    ws.scratch.assign(2 * c + n, 0);
    Value* rec2 = ws.scratch.data();
    Value* rec3 = rec2 + c;
    Value* idx = rec3 + c;
    std::iota(idx, idx + n, Value{1});
    revsort_kernel(*net, view, concat_gt, merge_gt, rec2, rec3, idx);
    diagnostics::count_totality_check(static_cast<std::uint64_t>(c) * 2);

    diagnostics::count_ancilla_check();
    for (std::size_t k = 0; k < 2 * c; ++k)
        if (rec2[k] != 0) diagnostics::fail("merge left a record bit set");
    for (std::size_t i = 0; i < n; ++i)
        if (idx[i] != static_cast<Value>(i + 1)) diagnostics::fail("merge left the index register dirty");
    diagnostics::count_sortedness_check();
    for (std::size_t i = 1; i < n; ++i)
        if (merge_gt(i - 1, i)) diagnostics::fail("merged list is not in merge order");

    // Entries from one side keep their relative order.
    Value last_left = 0, last_right = lcount;
    for (std::size_t i = 0; i < n; ++i) {
        const Value id = t[3 * i];
        Value& last = id <= lcount ? last_left : last_right;
        if (id <= last) diagnostics::fail("merge reordered entries of one side");
        last = id;
    }
    if (trace) {
        trace->indexed_after.clear();
        for (std::size_t i = 0; i < n; ++i) trace->indexed_after.push_back({t[3 * i], t[3 * i + 1], t[3 * i + 2]});
    }

    // Side indicators, then their prefix sums = ranks within each side.
    const std::size_t padded = pow2_at_least(n);
    ws.dl.assign(padded, 0);
    ws.dr.assign(padded, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const bool is_left = t[3 * i + 2] <= boundary;
        ws.dl[i] = is_left ? 1 : 0;
        ws.dr[i] = is_left ? 0 : 1;
    }
    const unsigned w = scan_width(padded, 1);
    prefix_sums_in_place(ws.dl, w);
    prefix_sums_in_place(ws.dr, w);
    if (trace) {
        trace->rank_left.assign(ws.dl.begin(), ws.dl.begin() + static_cast<std::ptrdiff_t>(n));
        trace->rank_right.assign(ws.dr.begin(), ws.dr.begin() + static_cast<std::ptrdiff_t>(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (ws.dl[i] + ws.dr[i] != static_cast<Value>(i + 1)) diagnostics::fail("rank arrays do not add up");
        const bool is_left = t[3 * i + 2] <= boundary;
        // Erase the index: it equals the rank within its side.
        t[3 * i] -= is_left ? ws.dl[i] : ws.dr[i] + lcount;
        if (t[3 * i] != 0) diagnostics::fail("index does not match its side rank");
        // A left entry moves down by the number of right entries above it.
        if (is_left) t[3 * i + 1] += ws.dr[i];
    }
    unprefix_sums_in_place(ws.dl);
    unprefix_sums_in_place(ws.dr);
    diagnostics::count_ancilla_check();
    for (std::size_t i = 0; i < padded; ++i) {
        const bool is_left = i < n && t[3 * i + 2] <= boundary;
        const bool is_right = i < n && !is_left;
        if (ws.dl[i] != (is_left ? 1 : 0) || ws.dr[i] != (is_right ? 1 : 0))
            diagnostics::fail("rank arrays did not uncompute");
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = {t[3 * i + 1], t[3 * i + 2]};
        if (i && out[i - 1].r >= out[i].r) diagnostics::fail("merged diagram rows are not increasing");
    }
}

} // namespace

Diagram merge_diagrams(const Diagram& left, const Diagram& right, DepthReport* depth, MergeTrace* trace) {
    check_rows(left, "left");
    check_rows(right, "right");
    Diagram out(left.size() + right.size());
    merge_core(left, right, out, trace);
    if (!left.empty() && !right.empty()) add_depth(depth, merge_cost(out.size()));
    return out;
}

DepthReport les_to_perm_cost(std::size_t n) {
    DepthReport d;
    const std::size_t padded = pow2_at_least(std::max<std::size_t>(n, 1));
    for (std::size_t k = 1; k < padded; k *= 2) d += merge_cost(2 * k);
    return d;
}

Permutation les_to_perm_parallel(std::span<const Value> s, DepthReport* depth) {
    require_les(s);
    const std::size_t n = s.size();
    const std::size_t padded = pow2_at_least(std::max<std::size_t>(n, 1));
    thread_local Diagram cur, next;
    cur.resize(padded);
    next.resize(padded);
    for (std::size_t c = 0; c < padded; ++c)
        cur[c] = {c < n ? s[c] : static_cast<Value>(c + 1), static_cast<Value>(c + 1)};
    for (std::size_t k = 1; k < padded; k *= 2) {
        for (std::size_t b = 0; b < padded; b += 2 * k) {
            std::span<const DiagramEntry> l(cur.data() + b, k), r(cur.data() + b + k, k);
            merge_core(l, r, std::span<DiagramEntry>(next.data() + b, 2 * k), nullptr);
        }
        std::swap(cur, next);
    }
    IntList image(n);
    for (std::size_t r = 0; r < padded; ++r) {
        if (cur[r].r != static_cast<Value>(r + 1)) diagnostics::fail("merged diagram does not cover every row");
        if (r < n)
            image[r] = cur[r].c;
        else if (cur[r].c != static_cast<Value>(r + 1))
            diagnostics::fail("padding column left its row");
    }
    add_depth(depth, les_to_perm_cost(n));
    return Permutation(std::move(image));
}

std::uint64_t LesRange::count() const {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) c *= static_cast<std::uint64_t>(hi[i] - lo[i] + 1);
    return c;
}

LesRange les_family_range(std::span<const Value> nsil) {
    CosetStructure cs(nsil);
    LesRange r;
    for (std::size_t i = 0; i < nsil.size(); ++i) {
        r.lo.push_back(static_cast<Value>(cs.block_start(i) + 1));
        r.hi.push_back(static_cast<Value>(i + 1));
    }
    return r;
}

void for_each_les(const LesRange& range, const std::function<void(std::span<const Value>)>& visit) {
    const std::size_t n = range.lo.size();
    IntList s = range.lo;
    while (true) {
        visit(s);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (s[i] < range.hi[i]) {
                ++s[i];
                for (std::size_t j = i + 1; j < n; ++j) s[j] = range.lo[j];
                break;
            }
            if (i == 0) return;
        }
        if (n == 0) return;
    }
}

std::vector<Les> les_family(std::span<const Value> nsil) {
    std::vector<Les> out;
    for_each_les(les_family_range(nsil), [&](std::span<const Value> s) { out.emplace_back(s.begin(), s.end()); });
    return out;
}

} // namespace qsym

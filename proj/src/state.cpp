#include "qsym/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qsym/diagnostics.hpp"

namespace qsym {

namespace {

int compare_keys(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    for (std::size_t w = 0; w < words; ++w) {
        if (a[w] != b[w]) return a[w] < b[w] ? -1 : 1;
    }
    return 0;
}

template <std::size_t W>
std::vector<std::uint32_t> sort_fixed(const std::vector<std::uint64_t>& keys, std::size_t n) {
    struct Item {
        std::uint64_t k[W];
        std::uint32_t idx;
    };
    std::vector<Item> items(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t w = 0; w < W; ++w) items[i].k[w] = keys[i * W + w];
        items[i].idx = static_cast<std::uint32_t>(i);
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        for (std::size_t w = 0; w < W; ++w)
            if (a.k[w] != b.k[w]) return a.k[w] < b.k[w];
        return a.idx < b.idx;
    });
    std::vector<std::uint32_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = items[i].idx;
    return order;
}

// Neumaier compensated sum; merged branches can number in the tens of
// thousands and naive summation drifts by ~1e-12 at that size.
struct CompensatedSum {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

} // namespace

SparseState::SparseState(Layout layout) : layout_(std::move(layout)) {}

SparseState SparseState::basis(Layout layout, const BasisConfig& config, Amplitude amplitude) {
    TermAccumulator acc(std::move(layout));
    acc.add(acc.layout().flatten(config), amplitude);
    return acc.sum();
}

SparseState SparseState::from_terms(Layout layout, const std::vector<std::pair<BasisConfig, Amplitude>>& terms) {
    TermAccumulator acc(std::move(layout));
    acc.reserve(terms.size());
    for (const auto& [cfg, a] : terms) acc.add(acc.layout().flatten(cfg), a);
    return acc.sum();
}

IntList SparseState::values(std::size_t t) const {
    IntList out(layout_.value_count());
    layout_.unpack(key(t), out);
    return out;
}

Amplitude SparseState::amplitude_of(const BasisConfig& config) const {
    return amplitude_of_flat(layout_.flatten(config));
}

Amplitude SparseState::amplitude_of_flat(std::span<const Value> flat) const {
    if (!layout_.in_range(flat)) return 0.0;
    const std::size_t w = layout_.words();
    std::vector<std::uint64_t> probe(w);
    layout_.pack(flat, probe.data());
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const int c = compare_keys(key(mid), probe.data(), w);
        if (c == 0) return amps_[mid];
        if (c < 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    return 0.0;
}

double SparseState::norm_squared() const {
    CompensatedSum s;
    for (const auto& a : amps_) s.add(std::norm(a));
    return s.value();
}

void SparseState::scale(Amplitude factor) {
    for (auto& a : amps_) a *= factor;
}

SparseState SparseState::normalized() const {
    const double n2 = norm_squared();
    if (n2 <= 0.0) throw ValidationError("cannot normalize the zero state");
    SparseState out = *this;
    out.scale(1.0 / std::sqrt(n2));
    return out;
}

TermAccumulator::TermAccumulator(Layout layout, double prune)
    : layout_(std::move(layout)), words_(layout_.words()), prune_(prune) {}

void TermAccumulator::reserve(std::size_t terms) {
    keys_.reserve(terms * words_);
    amps_.reserve(terms);
    sources_.reserve(terms);
}

void TermAccumulator::add(std::span<const Value> flat, Amplitude amplitude, std::size_t source) {
    const std::size_t at = keys_.size();
    keys_.resize(at + words_);
    layout_.pack(flat, keys_.data() + at);
    amps_.push_back(amplitude);
    sources_.push_back(source);
}

void TermAccumulator::resize(std::size_t terms) {
    keys_.assign(terms * words_, 0);
    amps_.assign(terms, 0.0);
    sources_.assign(terms, 0);
}

void TermAccumulator::set(std::size_t slot, std::span<const Value> flat, Amplitude amplitude, std::size_t source) {
    layout_.pack(flat, keys_.data() + slot * words_);
    amps_[slot] = amplitude;
    sources_[slot] = source;
}

std::vector<std::uint32_t> TermAccumulator::sorted_order() const {
    const std::size_t n = amps_.size();
    if (n > 0xffffffffu) throw ValidationError("too many terms");
    // Appending registers and tensoring sorted states keep the input order,
    // so check for it before sorting.
    bool ordered = true;
    for (std::size_t i = 1; i < n && ordered; ++i)
        ordered = compare_keys(keys_.data() + (i - 1) * words_, keys_.data() + i * words_, words_) <= 0;
    if (ordered) {
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        return order;
    }
    switch (words_) {
    case 1: return sort_fixed<1>(keys_, n);
    case 2: return sort_fixed<2>(keys_, n);
    case 3: return sort_fixed<3>(keys_, n);
    case 4: return sort_fixed<4>(keys_, n);
    default: break;
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    const std::size_t w = words_;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const int c = compare_keys(keys_.data() + a * w, keys_.data() + b * w, w);
        return c != 0 ? c < 0 : a < b;
    });
    return order;
}

SparseState TermAccumulator::sum(double inherited_pruned) {
    const auto order = sorted_order();
    SparseState out(layout_);
    out.pruned_mass_ = inherited_pruned;
    out.keys_.reserve(keys_.size());
    out.amps_.reserve(amps_.size());
    std::size_t i = 0;
    while (i < order.size()) {
        const std::uint64_t* k = keys_.data() + order[i] * words_;
        Amplitude total = amps_[order[i]];
        std::size_t j = i + 1;
        if (j < order.size() && compare_keys(k, keys_.data() + order[j] * words_, words_) == 0) {
            CompensatedSum re, im;
            re.add(total.real());
            im.add(total.imag());
            for (; j < order.size() && compare_keys(k, keys_.data() + order[j] * words_, words_) == 0; ++j) {
                re.add(amps_[order[j]].real());
                im.add(amps_[order[j]].imag());
            }
            total = {re.value(), im.value()};
        }
        if (std::abs(total) >= prune_) {
            out.keys_.insert(out.keys_.end(), k, k + words_);
            out.amps_.push_back(total);
        } else {
            out.pruned_mass_ += std::norm(total);
        }
        i = j;
    }
    keys_.clear();
    amps_.clear();
    sources_.clear();
    return out;
}

SparseState TermAccumulator::distinct(const std::function<std::string(std::size_t)>& describe,
                                      double inherited_pruned) {
    const auto order = sorted_order();
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (compare_keys(keys_.data() + order[i - 1] * words_, keys_.data() + order[i] * words_, words_) == 0) {
            std::vector<Value> flat(layout_.value_count());
            layout_.unpack(keys_.data() + order[i] * words_, flat);
            diagnostics::count_violation();
            throw ValidationError("map is not injective: " + describe(sources_[order[i - 1]]) + " and " +
                                  describe(sources_[order[i]]) + " both map to " + layout_.describe(flat));
        }
    }
    SparseState out(layout_);
    out.pruned_mass_ = inherited_pruned;
    out.keys_.resize(keys_.size());
    out.amps_.resize(amps_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::copy_n(keys_.data() + order[i] * words_, words_, out.keys_.data() + i * words_);
        out.amps_[i] = amps_[order[i]];
    }
    keys_.clear();
    amps_.clear();
    sources_.clear();
    return out;
}

} // namespace qsym

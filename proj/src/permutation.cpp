#include "qsym/permutation.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace qsym {

Permutation::Permutation(IntList image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size() + 1, false);
    for (Value v : image_) {
        if (v < 1 || v > static_cast<Value>(image_.size()) || seen[static_cast<std::size_t>(v)])
            throw ValidationError("not a permutation of 1..n: " + to_string(image_));
        seen[static_cast<std::size_t>(v)] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    IntList img(n);
    std::iota(img.begin(), img.end(), Value{1});
    return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
    IntList inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[static_cast<std::size_t>(image_[i] - 1)] = static_cast<Value>(i + 1);
    return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < image_.size(); ++i)
        if (image_[i] != static_cast<Value>(i + 1)) return false;
    return true;
}

IntList apply(const Permutation& p, std::span<const Value> list) {
    if (p.size() != list.size())
        throw ValidationError("permutation of size " + std::to_string(p.size()) + " applied to a list of size " +
                              std::to_string(list.size()));
    IntList out(list.size());
    for (std::size_t i = 0; i < list.size(); ++i) out[i] = list[static_cast<std::size_t>(p[i] - 1)];
    return out;
}

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw ValidationError("composing permutations of different sizes");
    IntList img(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) img[i] = b[static_cast<std::size_t>(a[i] - 1)];
    return Permutation(std::move(img));
}

std::vector<Permutation> all_permutations(std::size_t n) {
    IntList img(n);
    std::iota(img.begin(), img.end(), Value{1});
    std::vector<Permutation> out;
    out.reserve(factorial(n));
    do {
        out.emplace_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

bool is_nsil(std::span<const Value> list) { return std::is_sorted(list.begin(), list.end()); }

bool is_sil(std::span<const Value> list) {
    return std::adjacent_find(list.begin(), list.end(), std::greater_equal<Value>()) == list.end();
}

void require_nsil(std::span<const Value> list) {
    if (!is_nsil(list))
        throw ValidationError("list is not non-decreasing: " + to_string(IntList(list.begin(), list.end())));
}

CosetStructure::CosetStructure(std::span<const Value> nsil) : n_(nsil.size()), start_of_(nsil.size()) {
    require_nsil(nsil);
    for (std::size_t i = 0; i < nsil.size(); ++i) {
        if (i == 0 || nsil[i] != nsil[i - 1]) blocks_.push_back({i, 0, nsil[i]});
        ++blocks_.back().length;
        start_of_[i] = blocks_.back().start;
    }
}

std::uint64_t CosetStructure::subgroup_order() const {
    std::uint64_t order = 1;
    for (const auto& b : blocks_) order *= factorial(b.length);
    return order;
}

std::uint64_t factorial(std::size_t n) {
    if (n > 20) throw ValidationError("factorial overflow for n = " + std::to_string(n));
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

std::uint64_t multinomial_count(std::span<const Value> list) {
    std::map<Value, std::size_t> counts;
    for (Value v : list) ++counts[v];
    // Product of binomials avoids the n! overflow for n > 20.
    std::uint64_t result = 1;
    std::size_t placed = 0;
    for (const auto& [v, c] : counts) {
        for (std::size_t k = 1; k <= c; ++k) {
            result = result * (placed + k) / k;
        }
        placed += c;
    }
    return result;
}

std::uint64_t subgroup_order(std::span<const Value> nsil) { return CosetStructure(nsil).subgroup_order(); }

std::vector<Permutation> enumerate_H(std::span<const Value> nsil) {
    CosetStructure cs(nsil);
    std::vector<IntList> images{Permutation::identity(nsil.size()).image()};
    for (const auto& b : cs.blocks()) {
        if (b.length < 2) continue;
        std::vector<IntList> next;
        IntList local(b.length);
        for (const auto& img : images) {
            std::iota(local.begin(), local.end(), static_cast<Value>(b.start + 1));
            do {
                IntList x = img;
                std::copy(local.begin(), local.end(), x.begin() + static_cast<std::ptrdiff_t>(b.start));
                next.push_back(std::move(x));
            } while (std::next_permutation(local.begin(), local.end()));
        }
        images = std::move(next);
    }
    std::sort(images.begin(), images.end());
    std::vector<Permutation> out;
    out.reserve(images.size());
    for (auto& img : images) out.emplace_back(std::move(img));
    return out;
}

Permutation stable_rep_for(std::span<const Value> nsil, std::span<const Value> target) {
    CosetStructure cs(nsil);
    if (target.size() != nsil.size()) throw ValidationError("target length differs from the list");
    std::map<Value, std::size_t> next;
    for (const auto& b : cs.blocks()) next[b.value] = b.start;
    IntList img(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) {
        auto it = next.find(target[i]);
        if (it == next.end()) throw ValidationError("target is not a rearrangement of the list");
        const std::size_t pos = it->second++;
        if (pos >= nsil.size() || nsil[pos] != target[i]) throw ValidationError("target is not a rearrangement of the list");
        img[i] = static_cast<Value>(pos + 1);
    }
    return Permutation(std::move(img));
}

std::vector<Permutation> canonical_coset_reps(std::span<const Value> nsil) {
    require_nsil(nsil);
    std::vector<Permutation> out;
    for (const auto& target : multiset_permutations(nsil)) out.push_back(stable_rep_for(nsil, target));
    return out;
}

std::pair<Permutation, Permutation> coset_factor(const Permutation& sigma, std::span<const Value> nsil) {
    const IntList target = apply(sigma, nsil);
    Permutation rep = stable_rep_for(nsil, target);
    const Permutation rep_inv = rep.inverse();
    IntList h(sigma.size());
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = sigma[static_cast<std::size_t>(rep_inv[j] - 1)];
    return {std::move(rep), Permutation(std::move(h))};
}

std::vector<IntList> multiset_permutations(std::span<const Value> list) {
    IntList cur(list.begin(), list.end());
    std::sort(cur.begin(), cur.end());
    std::vector<IntList> out;
    do {
        out.push_back(cur);
    } while (std::next_permutation(cur.begin(), cur.end()));
    return out;
}

} // namespace qsym

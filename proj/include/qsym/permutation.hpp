#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qsym/errors.hpp"

namespace qsym {

// A bijection on {1..n}, stored as the image of 12...n.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(IntList image);

    static Permutation identity(std::size_t n);

    std::size_t size() const { return image_.size(); }
    const IntList& image() const { return image_; }
    Value operator[](std::size_t i) const { return image_[i]; }

    Permutation inverse() const;
    bool is_identity() const;

    auto operator<=>(const Permutation&) const = default;

private:
    IntList image_;
};

// apply(p, l)_i = l[p[i]], so apply(p, 12...n) = p.image().
IntList apply(const Permutation& p, std::span<const Value> list);

// The permutation with apply(compose(a, b), l) == apply(a, apply(b, l)).
Permutation compose(const Permutation& a, const Permutation& b);

std::vector<Permutation> all_permutations(std::size_t n);

bool is_nsil(std::span<const Value> list);
bool is_sil(std::span<const Value> list);
void require_nsil(std::span<const Value> list);

// Maximal run of equal values: 0-based start and length.
struct Block {
    std::size_t start = 0;
    std::size_t length = 0;
    Value value = 0;

    bool operator==(const Block&) const = default;
};

// Runs of an NSIL; these generate the stabilizer subgroup H_l.
class CosetStructure {
public:
    explicit CosetStructure(std::span<const Value> nsil);

    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t size() const { return n_; }
    // 0-based start of the run containing position i.
    std::size_t block_start(std::size_t i) const { return start_of_[i]; }
    std::uint64_t subgroup_order() const;

private:
    std::size_t n_ = 0;
    std::vector<Block> blocks_;
    std::vector<std::size_t> start_of_;
};

std::uint64_t factorial(std::size_t n);
std::uint64_t multinomial_count(std::span<const Value> list);

std::uint64_t subgroup_order(std::span<const Value> nsil);
// All h with apply(h, l) == l, in lexicographic order of images.
std::vector<Permutation> enumerate_H(std::span<const Value> nsil);
// Stable representatives: each keeps equal values in their original order.
std::vector<Permutation> canonical_coset_reps(std::span<const Value> nsil);
// The stable representative sending l to `target` (a rearrangement of l).
Permutation stable_rep_for(std::span<const Value> nsil, std::span<const Value> target);

// sigma = compose(rep, h) with rep stable and h in H_l; unique.
std::pair<Permutation, Permutation> coset_factor(const Permutation& sigma, std::span<const Value> nsil);

// All distinct rearrangements, sorted lexicographically.
std::vector<IntList> multiset_permutations(std::span<const Value> list);

} // namespace qsym

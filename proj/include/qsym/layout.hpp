#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsym/errors.hpp"

namespace qsym {

// A named block of `arity` integer elements, each in [0, bound).
struct RegisterSpec {
    std::string name;
    std::size_t arity = 0;
    Value bound = 2;

    bool operator==(const RegisterSpec&) const = default;
};

// One integer list per register, in layout order.
using BasisConfig = std::vector<IntList>;

// Bits needed to hold an element of a register with the given bound.
unsigned element_width(Value bound);

// Ordered register list.  A basis configuration is stored flat (registers
// concatenated) and packed big-endian into 64-bit words, so comparing packed
// keys word by word orders configurations lexicographically.
class Layout {
public:
    Layout() = default;
    explicit Layout(std::vector<RegisterSpec> registers);

    const std::vector<RegisterSpec>& registers() const { return regs_; }
    std::size_t register_count() const { return regs_.size(); }
    bool contains(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;
    const RegisterSpec& spec(std::string_view name) const { return regs_[index_of(name)]; }
    std::size_t offset(std::size_t reg) const { return offsets_[reg]; }
    std::size_t offset(std::string_view name) const { return offsets_[index_of(name)]; }

    std::size_t value_count() const { return total_values_; }
    std::size_t words() const { return words_; }
    std::size_t qubits() const { return total_bits_; }
    std::size_t register_qubits(std::string_view name) const;

    Layout with(RegisterSpec extra) const;
    Layout without(std::string_view name) const;

    // Throws ValidationError if a value is out of its register's range.
    void pack(std::span<const Value> flat, std::uint64_t* key) const;
    void unpack(const std::uint64_t* key, std::span<Value> flat) const;
    bool in_range(std::span<const Value> flat) const;

    IntList flatten(const BasisConfig& config) const;
    BasisConfig split(std::span<const Value> flat) const;
    std::string describe(std::span<const Value> flat) const;

    bool operator==(const Layout& o) const { return regs_ == o.regs_; }

private:
    std::vector<RegisterSpec> regs_;
    std::vector<std::size_t> offsets_;
    std::vector<unsigned> widths_;  // per flat value
    std::vector<std::uint32_t> bitpos_;
    std::vector<Value> bounds_;     // per flat value
    std::size_t total_values_ = 0;
    std::size_t total_bits_ = 0;
    std::size_t words_ = 0;
};

} // namespace qsym

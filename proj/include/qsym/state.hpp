#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qsym/layout.hpp"

namespace qsym {

using Amplitude = std::complex<double>;

// Terms with |amplitude| below this are dropped when states are rebuilt.
inline constexpr double kPruneThreshold = 1e-14;

// Sparse superposition over basis configurations of a Layout.  Terms are kept
// sorted by packed key and are unique; zero terms are never stored.
class SparseState {
public:
    SparseState() = default;
    explicit SparseState(Layout layout);

    static SparseState basis(Layout layout, const BasisConfig& config, Amplitude amplitude = 1.0);
    static SparseState from_terms(Layout layout, const std::vector<std::pair<BasisConfig, Amplitude>>& terms);

    const Layout& layout() const { return layout_; }
    std::size_t size() const { return amps_.size(); }
    bool empty() const { return amps_.empty(); }

    const std::uint64_t* key(std::size_t t) const { return keys_.data() + t * layout_.words(); }
    Amplitude amplitude(std::size_t t) const { return amps_[t]; }
    std::span<const Amplitude> amplitudes() const { return amps_; }
    void values(std::size_t t, std::span<Value> out) const { layout_.unpack(key(t), out); }
    IntList values(std::size_t t) const;
    BasisConfig config(std::size_t t) const { return layout_.split(values(t)); }

    // Returns 0 for configurations outside the support.
    Amplitude amplitude_of(const BasisConfig& config) const;
    Amplitude amplitude_of_flat(std::span<const Value> flat) const;

    double norm_squared() const;
    // Mass dropped by pruning since this state was first built.
    double pruned_mass() const { return pruned_mass_; }

    void scale(Amplitude factor);
    SparseState normalized() const;

private:
    friend class TermAccumulator;
    friend SparseState rename_register(const SparseState&, std::string_view, std::string);

    Layout layout_;
    std::vector<std::uint64_t> keys_;
    std::vector<Amplitude> amps_;
    double pruned_mass_ = 0.0;
};

// Collects (configuration, amplitude) pairs in arbitrary order and turns them
// into a canonical SparseState.  Each term remembers a caller-supplied source
// index so collisions can be traced back.
class TermAccumulator {
public:
    explicit TermAccumulator(Layout layout, double prune = kPruneThreshold);

    void reserve(std::size_t terms);
    void add(std::span<const Value> flat, Amplitude amplitude, std::size_t source = 0);
    std::size_t size() const { return amps_.size(); }
    const Layout& layout() const { return layout_; }

    // Direct slot access for writers that fill terms in parallel.
    void resize(std::size_t terms);
    void set(std::size_t slot, std::span<const Value> flat, Amplitude amplitude, std::size_t source);

    // Coinciding configurations are summed in insertion order.
    SparseState sum(double inherited_pruned = 0.0);

    // Coinciding configurations are an error; `describe` renders a source
    // index for the message.
    SparseState distinct(const std::function<std::string(std::size_t)>& describe, double inherited_pruned = 0.0);

private:
    std::vector<std::uint32_t> sorted_order() const;

    Layout layout_;
    std::size_t words_;
    double prune_;
    std::vector<std::uint64_t> keys_;
    std::vector<Amplitude> amps_;
    std::vector<std::size_t> sources_;
};

} // namespace qsym

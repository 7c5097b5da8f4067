#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qsym/network.hpp"
#include "qsym/ops.hpp"

namespace qsym {

// A data register made of one or more component registers of equal arity;
// element i is the tuple (comp_0[i], comp_1[i], ...).
using TupleRegister = std::vector<std::string>;

// A sequence of classical reversible steps that is lifted onto a state in a
// single pass.  Each step keeps its own preconditions and cost, so running
// the program equals lifting the steps one by one.
class ReversibleProgram {
public:
    explicit ReversibleProgram(Layout layout);

    const Layout& layout() const { return layout_; }

    // SORT: record register must be zero.
    ReversibleProgram& sort(const TupleRegister& data, const std::string& record, const SortingNetwork& net,
                            const ComparisonRule& rule);
    // Like sort() but without the zero-record precondition; the caller
    // vouches for the record contents (used inside inverse chains).
    ReversibleProgram& sort_unchecked(const TupleRegister& data, const std::string& record, const SortingNetwork& net,
                                      const ComparisonRule& rule);
    ReversibleProgram& unsort(const TupleRegister& data, const std::string& record, const SortingNetwork& net,
                              const ComparisonRule& rule);
    ReversibleProgram& shuffle(const TupleRegister& data, const std::string& record, const SortingNetwork& net);
    ReversibleProgram& unshuffle(const TupleRegister& data, const std::string& record, const SortingNetwork& net);

    // Arbitrary in-place bijection on the flat configuration.
    ReversibleProgram& step(std::string label, ClassicalMap map, DepthReport cost = {});

    DepthReport cost() const { return cost_; }
    std::size_t step_count() const { return steps_.size(); }

    // Runs the steps on one flat configuration.
    void apply(std::span<Value> flat) const;
    SparseState run(const SparseState& state, DepthReport* depth = nullptr, const LiftOptions& options = {}) const;

private:
    struct Bound {
        TupleView view;
        Value* record;
    };
    std::function<Bound(std::span<Value>)> binder(const TupleRegister& data, const std::string& record,
                                                  const SortingNetwork& net, std::size_t arity) const;
    void add_sort_cost(const SortingNetwork& net);

    Layout layout_;
    std::vector<std::pair<std::string, ClassicalMap>> steps_;
    DepthReport cost_;
};

// Builds a view of component registers inside a flat configuration.
TupleView register_view(const Layout& layout, const TupleRegister& data, std::span<Value> flat);

SparseState sort_op(const SparseState& s, const TupleRegister& data, const std::string& record,
                    const SortingNetwork& net, const ComparisonRule& rule, DepthReport* depth = nullptr);
SparseState unsort_op(const SparseState& s, const TupleRegister& data, const std::string& record,
                      const SortingNetwork& net, const ComparisonRule& rule, DepthReport* depth = nullptr);
SparseState shuffle_op(const SparseState& s, const TupleRegister& data, const std::string& record,
                       const SortingNetwork& net, DepthReport* depth = nullptr);
SparseState unshuffle_op(const SparseState& s, const TupleRegister& data, const std::string& record,
                         const SortingNetwork& net, DepthReport* depth = nullptr);

// REVSORT on a state: allocates the two record registers and the index
// register, runs the five-step chain and releases them (checked clean).
SparseState revsort_op(const SparseState& s, const TupleRegister& data, const ComparisonRule& source,
                       const ComparisonRule& target, const SortingNetwork& net, DepthReport* depth = nullptr);

RegisterSpec record_register(const std::string& name, const SortingNetwork& net);

} // namespace qsym

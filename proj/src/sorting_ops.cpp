#include "qsym/sorting_ops.hpp"

#include <numeric>

#include "qsym/diagnostics.hpp"

namespace qsym {

TupleView register_view(const Layout& layout, const TupleRegister& data, std::span<Value> flat) {
    if (data.empty() || data.size() > kMaxTupleArity) throw ValidationError("unsupported tuple register width");
    TupleView v;
    v.arity = data.size();
    v.stride = 1;
    v.size = layout.spec(data[0]).arity;
    for (std::size_t c = 0; c < data.size(); ++c) {
        if (layout.spec(data[c]).arity != v.size) throw ValidationError("tuple components have different lengths");
        v.comp[c] = flat.data() + layout.offset(data[c]);
    }
    return v;
}

RegisterSpec record_register(const std::string& name, const SortingNetwork& net) {
    return {name, net.comparator_count(), 2};
}

ReversibleProgram::ReversibleProgram(Layout layout) : layout_(std::move(layout)) {}

std::function<ReversibleProgram::Bound(std::span<Value>)> ReversibleProgram::binder(const TupleRegister& data,
                                                                                     const std::string& record,
                                                                                     const SortingNetwork& net,
                                                                                     std::size_t arity) const {
    if (data.size() != arity)
        throw ValidationError("rule arity " + std::to_string(arity) + " does not match a data register of " +
                              std::to_string(data.size()) + " components");
    const std::size_t n = layout_.spec(data[0]).arity;
    if (net.width() != n)
        throw ValidationError("network width " + std::to_string(net.width()) + " does not match register length " +
                              std::to_string(n));
    if (layout_.spec(record).arity != net.comparator_count())
        throw ValidationError("record register '" + record + "' must hold " + std::to_string(net.comparator_count()) +
                              " bits");
    if (layout_.spec(record).bound != 2) throw ValidationError("record register '" + record + "' must be binary");
    std::vector<std::size_t> offs;
    for (const auto& d : data) {
        if (layout_.spec(d).arity != n) throw ValidationError("tuple components have different lengths");
        offs.push_back(layout_.offset(d));
    }
    const std::size_t roff = layout_.offset(record);
    return [offs, roff, n](std::span<Value> flat) {
        Bound b;
        b.view.arity = offs.size();
        b.view.size = n;
        for (std::size_t c = 0; c < offs.size(); ++c) b.view.comp[c] = flat.data() + offs[c];
        b.record = flat.data() + roff;
        return b;
    };
}

void ReversibleProgram::add_sort_cost(const SortingNetwork& net) {
    DepthReport d;
    d.comparator_layers = net.depth();
    cost_ += d;
}

ReversibleProgram& ReversibleProgram::sort(const TupleRegister& data, const std::string& record,
                                           const SortingNetwork& net, const ComparisonRule& rule) {
    auto bind = binder(data, record, net, rule.arity());
    auto netp = std::make_shared<const SortingNetwork>(net);
    const Layout layout = layout_;
    const std::size_t c = net.comparator_count();
    steps_.emplace_back("sort", [bind, netp, rule, layout, c, record](std::span<Value> flat) {
        auto b = bind(flat);
        for (std::size_t k = 0; k < c; ++k)
            if (b.record[k] != 0)
                throw ValidationError("sort needs a zero record register '" + record + "', got " +
                                      layout.describe(flat));
        sort_gates(*netp, b.view, b.record, greater_on(b.view, rule));
    });
    add_sort_cost(net);
    return *this;
}

ReversibleProgram& ReversibleProgram::sort_unchecked(const TupleRegister& data, const std::string& record,
                                                     const SortingNetwork& net, const ComparisonRule& rule) {
    auto bind = binder(data, record, net, rule.arity());
    auto netp = std::make_shared<const SortingNetwork>(net);
    steps_.emplace_back("sort", [bind, netp, rule](std::span<Value> flat) {
        auto b = bind(flat);
        sort_gates(*netp, b.view, b.record, greater_on(b.view, rule));
    });
    add_sort_cost(net);
    return *this;
}

ReversibleProgram& ReversibleProgram::unsort(const TupleRegister& data, const std::string& record,
                                             const SortingNetwork& net, const ComparisonRule& rule) {
    auto bind = binder(data, record, net, rule.arity());
    auto netp = std::make_shared<const SortingNetwork>(net);
    steps_.emplace_back("unsort", [bind, netp, rule](std::span<Value> flat) {
        auto b = bind(flat);
        unsort_gates(*netp, b.view, b.record, greater_on(b.view, rule));
    });
    add_sort_cost(net);
    return *this;
}

ReversibleProgram& ReversibleProgram::shuffle(const TupleRegister& data, const std::string& record,
                                              const SortingNetwork& net) {
    auto bind = binder(data, record, net, data.size());
    auto netp = std::make_shared<const SortingNetwork>(net);
    steps_.emplace_back("shuffle", [bind, netp](std::span<Value> flat) {
        auto b = bind(flat);
        shuffle_gates(*netp, b.view, b.record);
    });
    add_sort_cost(net);
    return *this;
}

ReversibleProgram& ReversibleProgram::unshuffle(const TupleRegister& data, const std::string& record,
                                                const SortingNetwork& net) {
    auto bind = binder(data, record, net, data.size());
    auto netp = std::make_shared<const SortingNetwork>(net);
    steps_.emplace_back("unshuffle", [bind, netp](std::span<Value> flat) {
        auto b = bind(flat);
        unshuffle_gates(*netp, b.view, b.record);
    });
    add_sort_cost(net);
    return *this;
}

ReversibleProgram& ReversibleProgram::step(std::string label, ClassicalMap map, DepthReport cost) {
    steps_.emplace_back(std::move(label), std::move(map));
    cost_ += cost;
    return *this;
}

void ReversibleProgram::apply(std::span<Value> flat) const {
    for (const auto& [label, fn] : steps_) fn(flat);
}

SparseState ReversibleProgram::run(const SparseState& state, DepthReport* depth, const LiftOptions& options) const {
    if (!(state.layout() == layout_)) throw ValidationError("program built for a different layout");
    auto out = lift(state, [this](std::span<Value> flat) { apply(flat); }, options);
    add_depth(depth, cost_);
    return out;
}

SparseState sort_op(const SparseState& s, const TupleRegister& data, const std::string& record,
                    const SortingNetwork& net, const ComparisonRule& rule, DepthReport* depth) {
    return ReversibleProgram(s.layout()).sort(data, record, net, rule).run(s, depth);
}

SparseState unsort_op(const SparseState& s, const TupleRegister& data, const std::string& record,
                      const SortingNetwork& net, const ComparisonRule& rule, DepthReport* depth) {
    return ReversibleProgram(s.layout()).unsort(data, record, net, rule).run(s, depth);
}

SparseState shuffle_op(const SparseState& s, const TupleRegister& data, const std::string& record,
                       const SortingNetwork& net, DepthReport* depth) {
    return ReversibleProgram(s.layout()).shuffle(data, record, net).run(s, depth);
}

SparseState unshuffle_op(const SparseState& s, const TupleRegister& data, const std::string& record,
                         const SortingNetwork& net, DepthReport* depth) {
    return ReversibleProgram(s.layout()).unshuffle(data, record, net).run(s, depth);
}

SparseState revsort_op(const SparseState& s, const TupleRegister& data, const ComparisonRule& source,
                       const ComparisonRule& target, const SortingNetwork& net, DepthReport* depth) {
    const std::size_t n = s.layout().spec(data.at(0)).arity;
    std::string r2 = "revsort.record2", r3 = "revsort.record3", ix = "revsort.index";
    IntList ident(n);
    std::iota(ident.begin(), ident.end(), Value{1});
    SparseState w = add_register(s, record_register(r2, net));
    w = add_register(w, record_register(r3, net));
    w = add_register(w, {ix, n, static_cast<Value>(n) + 1}, ident);
    const Layout layout = w.layout();
    const ComparisonRule src = source;
    ReversibleProgram prog(layout);
    prog.step("check source order", [layout, data, src](std::span<Value> flat) {
        if (!is_sorted_under(register_view(layout, data, flat), src))
            throw ValidationError("revsort input is not sorted under '" + src.name() + "': " + layout.describe(flat));
    });
    prog.sort(data, r2, net, target)
        .sort(data, r3, net, source)
        .unsort({ix}, r2, net, ascending())
        .shuffle({ix}, r3, net)
        .unsort(data, r3, net, source);
    DepthReport d;
    w = prog.run(w, &d);
    d.note_ancillas(w.layout().register_qubits(r2) + w.layout().register_qubits(r3) + w.layout().register_qubits(ix));
    w = release_register(w, ix, ident).state;
    w = release_register(w, r3).state;
    w = release_register(w, r2).state;
    add_depth(depth, d);
    return w;
}

} // namespace qsym

#include "qsym/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <tuple>

#include "qsym/diagnostics.hpp"
#include "qsym/duplicates.hpp"
#include "qsym/les.hpp"
#include "qsym/permutation.hpp"
#include "qsym/sorting_ops.hpp"

namespace qsym {

namespace {

IntList identity_list(std::size_t n) {
    IntList v(n);
    std::iota(v.begin(), v.end(), Value{1});
    return v;
}

Value choose_bound(std::span<const Value> list, Value bound) {
    Value top = 0;
    for (Value v : list) {
        if (v < 0) throw ValidationError("list entries must be non-negative");
        top = std::max(top, v + 1);
    }
    if (bound == 0) return std::max<Value>(top, 2);
    if (top > bound) throw ValidationError("list entry exceeds the register bound " + std::to_string(bound));
    return bound;
}

std::size_t data_length(const SparseState& s) {
    if (!s.layout().contains(reg::data)) throw ValidationError("state has no 'data' register");
    return s.layout().spec(reg::data).arity;
}

// Every term's data register must be an SIL (strict) or an NSIL.
void check_data(const SparseState& s, bool strict) {
    const std::size_t off = s.layout().offset(reg::data), n = data_length(s);
    IntList flat(s.layout().value_count());
    for (std::size_t t = 0; t < s.size(); ++t) {
        s.values(t, flat);
        std::span<const Value> l(flat.data() + off, n);
        if (strict ? !is_sil(l) : !is_nsil(l))
            throw ValidationError(std::string("data register must hold ") + (strict ? "an SIL" : "an NSIL") +
                                  " on every term, got " + to_string(IntList(l.begin(), l.end())));
    }
}

bool parallel_kernel(const SymmetrizeOptions& o, std::size_t n) {
    switch (o.les_kernel) {
    case LesKernel::parallel: return true;
    case LesKernel::naive: return false;
    case LesKernel::automatic: break;
    }
    return n <= kParallelKernelLimit;
}

// dup += sign * detect_duplicates(data), modulo the register bound.
SparseState shift_dup(const SparseState& s, int sign) {
    const Layout& layout = s.layout();
    const std::size_t doff = layout.offset(reg::data), uoff = layout.offset(reg::dup);
    const std::size_t n = layout.spec(reg::data).arity;
    const Value mod = layout.spec(reg::dup).bound;
    return lift(s, [=](std::span<Value> flat) {
        const IntList d = detect_duplicates(std::span<const Value>(flat.data() + doff, n));
        for (std::size_t i = 0; i < n; ++i) {
            Value& x = flat[uoff + i];
            x = ((x + sign * d[i]) % mod + mod) % mod;
        }
    });
}

RegisterPreparation resource_projection(const Layout& layout) {
    const std::size_t n = layout.spec(reg::perm).arity;
    const double amp = 1.0 / std::sqrt(static_cast<double>(factorial(n)));
    RegisterPreparation prep;
    prep.target = reg::perm;
    prep.branches = [n, amp](std::span<const Value>, const std::function<void(std::span<const Value>, Amplitude)>& emit) {
        for (const auto& p : all_permutations(n)) emit(p.image(), amp);
    };
    prep.amplitude = [n, amp](std::span<const Value>, std::span<const Value> contents) -> Amplitude {
        std::vector<bool> seen(n + 1, false);
        for (Value v : contents) {
            if (v < 1 || v > static_cast<Value>(n) || seen[static_cast<std::size_t>(v)]) return 0.0;
            seen[static_cast<std::size_t>(v)] = true;
        }
        return amp;
    };
    return prep;
}

struct CachedResource {
    std::shared_ptr<const SparseState> state;
    DepthReport depth;
};

} // namespace

Layout data_layout(std::size_t n, Value bound) { return Layout({{reg::data, n, bound}}); }

SparseState list_state(const IntList& list, Value bound) {
    return SparseState::basis(data_layout(list.size(), choose_bound(list, bound)), {list});
}

SparseState list_superposition(const std::vector<std::pair<IntList, Amplitude>>& terms, Value bound) {
    if (terms.empty()) throw ValidationError("superposition needs at least one term");
    const std::size_t n = terms.front().first.size();
    Value b = bound;
    for (const auto& [l, a] : terms) {
        if (l.size() != n) throw ValidationError("all lists in a superposition must have the same length");
        if (bound == 0) b = std::max(b, choose_bound(l, 0));
    }
    std::vector<std::pair<BasisConfig, Amplitude>> cfg;
    for (const auto& [l, a] : terms) {
        choose_bound(l, b);
        cfg.push_back({{l}, a});
    }
    return SparseState::from_terms(data_layout(n, b), cfg);
}

RegisterPreparation uniform_les_preparation(const Layout& layout, const std::string& name) {
    const std::size_t n = layout.spec(name).arity;
    const double amp = 1.0 / std::sqrt(static_cast<double>(factorial(n)));
    LesRange range;
    for (std::size_t i = 0; i < n; ++i) {
        range.lo.push_back(1);
        range.hi.push_back(static_cast<Value>(i + 1));
    }
    RegisterPreparation prep;
    prep.target = name;
    prep.branches = [range, amp](std::span<const Value>,
                                 const std::function<void(std::span<const Value>, Amplitude)>& emit) {
        for_each_les(range, [&](std::span<const Value> s) { emit(s, amp); });
    };
    prep.amplitude = [amp](std::span<const Value>, std::span<const Value> contents) -> Amplitude {
        return is_les(contents) ? Amplitude(amp) : Amplitude(0.0);
    };
    return prep;
}

RegisterPreparation subgroup_les_preparation(const Layout& layout, const std::string& name, const std::string& dup) {
    const std::size_t n = layout.spec(name).arity;
    if (layout.spec(dup).arity != n) throw ValidationError("dup register length does not match");
    const std::size_t off = layout.offset(dup);
    auto range_of = [n, off](std::span<const Value> config) {
        const IntList start = run_starts_from_dup(config.subspan(off, n));
        LesRange r;
        for (std::size_t i = 0; i < n; ++i) {
            r.lo.push_back(start[i] + 1);
            r.hi.push_back(static_cast<Value>(i + 1));
        }
        return r;
    };
    RegisterPreparation prep;
    prep.target = name;
    prep.branches = [range_of](std::span<const Value> config,
                               const std::function<void(std::span<const Value>, Amplitude)>& emit) {
        const LesRange r = range_of(config);
        const double amp = 1.0 / std::sqrt(static_cast<double>(r.count()));
        for_each_les(r, [&](std::span<const Value> s) { emit(s, amp); });
    };
    prep.amplitude = [range_of](std::span<const Value> config, std::span<const Value> contents) -> Amplitude {
        const LesRange r = range_of(config);
        for (std::size_t i = 0; i < contents.size(); ++i)
            if (contents[i] < r.lo[i] || contents[i] > r.hi[i]) return 0.0;
        return 1.0 / std::sqrt(static_cast<double>(r.count()));
    };
    return prep;
}

SparseState les_register_to_perm(const SparseState& s, const std::string& name, const SymmetrizeOptions& options,
                                 DepthReport* depth) {
    const std::size_t off = s.layout().offset(name), n = s.layout().spec(name).arity;
    const bool parallel = parallel_kernel(options, n);
    auto out = lift(
        s,
        [=](std::span<Value> flat) {
            std::span<Value> r = flat.subspan(off, n);
            const Permutation p = parallel ? les_to_perm_parallel(r) : les_to_perm_naive(r);
            std::copy(p.image().begin(), p.image().end(), r.begin());
        },
        options.lift);
    add_depth(depth, les_to_perm_cost(n));
    return out;
}

SparseState perm_register_to_les(const SparseState& s, const std::string& name, DepthReport* depth) {
    const std::size_t off = s.layout().offset(name), n = s.layout().spec(name).arity;
    auto out = lift(s, [=](std::span<Value> flat) {
        std::span<Value> r = flat.subspan(off, n);
        const Les les = perm_to_les(Permutation(IntList(r.begin(), r.end())));
        std::copy(les.begin(), les.end(), r.begin());
    });
    add_depth(depth, les_to_perm_cost(n));
    return out;
}

SparseState exact_sil_symmetrize(const SparseState& state, const SymmetrizeOptions& options, DepthReport* depth) {
    const std::size_t n = data_length(state);
    check_data(state, true);
    const auto net = cached_network(options.network, n);
    DepthReport d;
    SparseState w = add_register(state, {reg::perm, n, static_cast<Value>(n) + 1});
    w = prepare(w, uniform_les_preparation(w.layout(), reg::perm));
    d.elementary_layers += 1;
    w = les_register_to_perm(w, reg::perm, options, &d);
    w = add_register(w, record_register(reg::record, *net));
    d.note_ancillas(w.layout().register_qubits(reg::perm) + w.layout().register_qubits(reg::record));
    w = sort_op(w, {reg::perm}, reg::record, *net, ascending(), &d);
    // Sorting leaves 12...n on every term, so the platform is independent.
    w = release_register(w, reg::perm, identity_list(n)).state;
    w = unsort_op(w, {reg::data}, reg::record, *net, ascending(), &d);
    w = release_register(w, reg::record).state;
    add_depth(depth, d);
    return w;
}

std::shared_ptr<const SparseState> permutation_resource(std::size_t n, const SymmetrizeOptions& options,
                                                        DepthReport* depth, double* success_probability) {
    if (success_probability) *success_probability = 1.0;
    if (options.resource == ResourceKind::berry) {
        BerryConfig cfg = options.berry;
        cfg.postselect = true;
        DepthReport d;
        auto res = berry_sil_symmetrize(list_state(identity_list(n), static_cast<Value>(n) + 1), cfg, options.network, &d);
        if (success_probability) *success_probability = res.success_probability;
        add_depth(depth, d);
        return std::make_shared<const SparseState>(rename_register(res.state.normalized(), reg::data, reg::perm));
    }
    static std::mutex mutex;
    static std::map<std::tuple<std::size_t, int, bool>, CachedResource> cache;
    const auto key = std::make_tuple(n, static_cast<int>(options.network), parallel_kernel(options, n));
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) {
            add_depth(depth, it->second.depth);
            return it->second.state;
        }
    }
    CachedResource entry;
    SparseState s = exact_sil_symmetrize(list_state(identity_list(n), static_cast<Value>(n) + 1), options, &entry.depth);
    entry.state = std::make_shared<const SparseState>(rename_register(s, reg::data, reg::perm));
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, fresh] = cache.emplace(key, entry);
    add_depth(depth, it->second.depth);
    return it->second.state;
}

SingleResult nsil_symmetrize_single(const IntList& nsil, const SymmetrizeOptions& options, Value bound) {
    require_nsil(nsil);
    const std::size_t n = nsil.size();
    SingleResult result;
    DepthReport& d = result.depth;
    const auto resource = permutation_resource(n, options, &d, &result.resource_success);
    const auto net = cached_network(options.network, n);
    SparseState w = tensor(list_state(nsil, bound), *resource);
    w = add_register(w, record_register(reg::record, *net));
    d.note_ancillas(w.layout().register_qubits(reg::perm) + w.layout().register_qubits(reg::record));
    // The platform register multiplies the random permutation into the data
    // list and is then sorted back into an H_l orbit.
    ReversibleProgram prog(w.layout());
    prog.sort({reg::perm}, reg::record, *net, ascending())
        .shuffle({reg::data}, reg::record, *net)
        .unsort({reg::perm}, reg::record, *net, ascending())
        .sort({reg::data}, reg::record, *net, ascending())
        .unshuffle({reg::perm}, reg::record, *net)
        .unsort({reg::data}, reg::record, *net, ascending());
    w = prog.run(w, &d, options.lift);
    w = release_register(w, reg::record).state;
    result.joint = w;
    auto f = factor_out(w, {reg::data});
    result.state = std::move(f.kept);
    result.platform = std::move(f.rest);
    result.entropy = f.entropy;
    return result;
}

SparseState subgroup_superposition(const SparseState& state, const SymmetrizeOptions& options, DepthReport* depth) {
    const std::size_t n = data_length(state);
    check_data(state, false);
    const Value bound = static_cast<Value>(n) + 1;
    DepthReport d;
    SparseState w = add_register(state, {reg::dup, n, bound});
    w = shift_dup(w, +1);
    d += duplicate_detection_cost(n);
    w = add_register(w, {reg::perm, n, bound});
    w = prepare(w, subgroup_les_preparation(w.layout(), reg::perm, reg::dup));
    d.elementary_layers += 1;
    w = les_register_to_perm(w, reg::perm, options, &d);
    w = shift_dup(w, -1);
    d += duplicate_detection_cost(n);
    w = release_register(w, reg::dup).state;
    add_depth(depth, d);
    return w;
}

ProjectionResult subgroup_superposition_inverse(const SparseState& state, const SymmetrizeOptions&,
                                                DepthReport* depth) {
    const std::size_t n = data_length(state);
    check_data(state, false);
    DepthReport d;
    SparseState w = add_register(state, {reg::dup, n, static_cast<Value>(n) + 1});
    w = shift_dup(w, +1);
    d += duplicate_detection_cost(n);
    w = perm_register_to_les(w, reg::perm, &d);
    ProjectionResult pr = unprepare(w, subgroup_les_preparation(w.layout(), reg::perm, reg::dup));
    d.elementary_layers += 1;
    w = shift_dup(pr.state, -1);
    d += duplicate_detection_cost(n);
    w = release_register(w, reg::dup).state;
    pr.state = release_register(w, reg::perm).state;
    add_depth(depth, d);
    return pr;
}

SuperposedResult nsil_symmetrize_superposed(const SparseState& state, const SymmetrizeOptions& options) {
    const std::size_t n = data_length(state);
    check_data(state, false);
    SuperposedResult result;
    DepthReport& d = result.depth;
    double success = 1.0;
    const auto resource = permutation_resource(n, options, &d, &success);
    const auto net = cached_network(options.network, n);
    SparseState w = tensor(state, *resource);
    w = add_register(w, record_register(reg::record, *net));
    d.note_ancillas(w.layout().register_qubits(reg::perm) + w.layout().register_qubits(reg::record));
    ReversibleProgram prog(w.layout());
    prog.sort({reg::perm}, reg::record, *net, ascending())
        .shuffle({reg::data}, reg::record, *net)
        .unsort({reg::perm}, reg::record, *net, ascending())
        .sort({reg::data}, reg::record, *net, ascending())
        .unshuffle({reg::perm}, reg::record, *net);
    w = prog.run(w, &d, options.lift);
    // The platform now holds the H_l orbit of the sorted list; clearing it
    // needs the list still sorted, so it happens before the last unsort.
    ProjectionResult pr = subgroup_superposition_inverse(w, options, &d);
    result.clean_mass = pr.kept_fraction;
    w = unsort_op(pr.state, {reg::data}, reg::record, *net, ascending(), &d);
    ProjectionResult rel = release_register(w, reg::record);
    result.clean_mass *= rel.kept_fraction;
    diagnostics::count_ancilla_check();
    if (result.clean_mass < 1.0 - 1e-9)
        diagnostics::fail("ancillas not clean after symmetrization (clean mass " + std::to_string(result.clean_mass) +
                          ")");
    result.state = std::move(rel.state);
    return result;
}

SuperposedResult nsil_unsymmetrize_superposed(const SparseState& state, const SymmetrizeOptions& options) {
    const std::size_t n = data_length(state);
    const auto net = cached_network(options.network, n);
    SuperposedResult result;
    DepthReport& d = result.depth;
    const double total = state.norm_squared();
    SparseState w = add_register(state, record_register(reg::record, *net));
    w = sort_op(w, {reg::data}, reg::record, *net, ascending(), &d);
    w = subgroup_superposition(w, options, &d);
    ReversibleProgram prog(w.layout());
    prog.shuffle({reg::perm}, reg::record, *net)
        .unsort({reg::data}, reg::record, *net, ascending())
        .sort_unchecked({reg::perm}, reg::record, *net, ascending())
        .unshuffle({reg::data}, reg::record, *net)
        .unsort({reg::perm}, reg::record, *net, ascending());
    w = prog.run(w, &d, options.lift);
    ProjectionResult pr = unprepare(w, resource_projection(w.layout()));
    w = release_register(pr.state, reg::perm).state;
    ProjectionResult rel = release_register(w, reg::record, {}, 1.0);
    result.state = std::move(rel.state);
    result.clean_mass = total > 0 ? result.state.norm_squared() / total : 1.0;
    if (result.clean_mass < 1.0 - 1e-9)
        throw ValidationError("input is not permutation invariant (symmetric weight " +
                              std::to_string(result.clean_mass) + ")");
    return result;
}

SparseState reference_symmetrization(const SparseState& state) {
    const std::size_t n = data_length(state), off = state.layout().offset(reg::data);
    TermAccumulator acc(state.layout());
    IntList flat(state.layout().value_count());
    for (std::size_t t = 0; t < state.size(); ++t) {
        state.values(t, flat);
        IntList l(flat.begin() + static_cast<std::ptrdiff_t>(off), flat.begin() + static_cast<std::ptrdiff_t>(off + n));
        std::sort(l.begin(), l.end());
        const auto perms = multiset_permutations(l);
        const Amplitude a = state.amplitude(t) / std::sqrt(static_cast<double>(perms.size()));
        for (const auto& p : perms) {
            std::copy(p.begin(), p.end(), flat.begin() + static_cast<std::ptrdiff_t>(off));
            acc.add(flat, a, t);
        }
    }
    return acc.sum();
}

SparseState dicke(std::size_t n, std::size_t k, const SymmetrizeOptions& options, DepthReport* depth) {
    if (k > n) throw ValidationError("Dicke weight k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
    IntList l(n, 0);
    std::fill(l.begin() + static_cast<std::ptrdiff_t>(n - k), l.end(), 1);
    auto r = nsil_symmetrize_single(l, options, 2);
    add_depth(depth, r.depth);
    return r.state;
}

SparseState dicke_superposition(std::size_t n, const std::map<std::size_t, Amplitude>& weights,
                                const SymmetrizeOptions& options, DepthReport* depth) {
    double norm = 0.0;
    std::vector<std::pair<IntList, Amplitude>> terms;
    for (const auto& [k, w] : weights) {
        if (k > n) throw ValidationError("Dicke weight k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
        norm += std::norm(w);
        IntList l(n, 0);
        std::fill(l.begin() + static_cast<std::ptrdiff_t>(n - k), l.end(), 1);
        terms.push_back({l, w});
    }
    if (terms.empty() || std::abs(norm - 1.0) > 1e-9)
        throw ValidationError("Dicke weights must be normalized (squared norm " + std::to_string(norm) + ")");
    auto r = nsil_symmetrize_superposed(list_superposition(terms, 2), options);
    add_depth(depth, r.depth);
    return r.state;
}

} // namespace qsym

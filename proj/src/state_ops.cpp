#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_map>

#include <Eigen/Dense>

#include "qsym/diagnostics.hpp"
#include "qsym/ops.hpp"

namespace qsym {

namespace {

void check_norm(double before, double after, double tolerance, const char* what) {
    diagnostics::count_norm_check();
    const double scale = std::max(1.0, before);
    if (std::abs(after - before) > tolerance * scale) {
        diagnostics::count_violation();
        throw ValidationError(std::string(what) + ": norm changed from " + std::to_string(before) + " to " +
                              std::to_string(after) + " (map is not an isometry on the touched support)");
    }
}

template <class Body>
void for_chunks(std::size_t count, std::size_t threads, Body body) {
    threads = std::max<std::size_t>(1, std::min(threads, count / 1024 + 1));
    if (threads == 1) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t step = (count + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t lo = std::min(count, t * step);
        const std::size_t hi = std::min(count, lo + step);
        pool.emplace_back([&, t, lo, hi] {
            try {
                body(lo, hi);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

class VectorSink : public BranchSink {
public:
    std::vector<Value> flat;
    std::vector<Amplitude> weights;
    std::size_t width;

    explicit VectorSink(std::size_t w) : width(w) {}

    void emit(std::span<const Value> f, Amplitude w) override {
        if (f.size() != width) throw ValidationError("branch emitted a configuration of the wrong size");
        flat.insert(flat.end(), f.begin(), f.end());
        weights.push_back(w);
    }
    void clear() {
        flat.clear();
        weights.clear();
    }
};

std::vector<std::size_t> register_indices(const Layout& layout, const std::vector<std::string>& names) {
    std::vector<std::size_t> idx;
    for (const auto& n : names) idx.push_back(layout.index_of(n));
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) throw ValidationError("register listed twice");
    return idx;
}

// Splits every term into (A part, B part) for the registers in `keep` and
// their complement.
struct Bipartition {
    Layout a_layout, b_layout;
    std::vector<std::size_t> a_pos, b_pos;  // flat positions

    Bipartition(const Layout& layout, const std::vector<std::string>& keep) {
        const auto idx = register_indices(layout, keep);
        std::vector<RegisterSpec> a, b;
        for (std::size_t r = 0; r < layout.register_count(); ++r) {
            const auto& spec = layout.registers()[r];
            const bool in_a = std::binary_search(idx.begin(), idx.end(), r);
            (in_a ? a : b).push_back(spec);
            for (std::size_t k = 0; k < spec.arity; ++k) (in_a ? a_pos : b_pos).push_back(layout.offset(r) + k);
        }
        a_layout = Layout(a);
        b_layout = Layout(b);
    }
};

struct KeyHash {
    std::size_t operator()(const IntList& v) const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
        return h;
    }
};

// Dense ids for the distinct sub-configurations at positions `pos`.
std::vector<std::uint32_t> group_ids(const SparseState& s, const Layout& sub, const std::vector<std::size_t>& pos,
                                     std::size_t& count) {
    const std::size_t w = sub.words();
    std::vector<std::uint32_t> ids(s.size(), 0);
    count = s.empty() ? 0 : 1;
    if (w == 0 || s.empty()) return ids;
    std::vector<std::uint64_t> keys(s.size() * w);
    IntList flat(s.layout().value_count()), part(pos.size());
    for (std::size_t t = 0; t < s.size(); ++t) {
        s.values(t, flat);
        for (std::size_t i = 0; i < pos.size(); ++i) part[i] = flat[pos[i]];
        sub.pack(part, keys.data() + t * w);
    }
    std::vector<std::uint32_t> order(s.size());
    std::iota(order.begin(), order.end(), 0u);
    auto less = [&](std::uint32_t x, std::uint32_t y) {
        return std::lexicographical_compare(keys.begin() + x * w, keys.begin() + x * w + w, keys.begin() + y * w,
                                            keys.begin() + y * w + w);
    };
    std::sort(order.begin(), order.end(), less);
    std::uint32_t id = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k && less(order[k - 1], order[k])) ++id;
        ids[order[k]] = id;
    }
    count = static_cast<std::size_t>(id) + 1;
    return ids;
}

// Gram matrix of the reduced state on the smaller side of the cut (the two
// reduced states share their nonzero spectrum).
Eigen::MatrixXcd reduced_gram(const SparseState& s, const Bipartition& bp) {
    std::size_t na = 0, nb = 0;
    const auto ia = group_ids(s, bp.a_layout, bp.a_pos, na);
    const auto ib = group_ids(s, bp.b_layout, bp.b_pos, nb);
    const bool a_small = na <= nb;
    const std::size_t dim = a_small ? na : nb, other = a_small ? nb : na;
    const auto& row = a_small ? ia : ib;
    const auto& col = a_small ? ib : ia;
    if (dim > 6000) throw ValidationError("reduced state too large to diagonalize");
    const auto d = static_cast<Eigen::Index>(dim);
    if (dim * other <= (std::size_t{1} << 22)) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, static_cast<Eigen::Index>(other));
        for (std::size_t t = 0; t < s.size(); ++t) m(row[t], col[t]) += s.amplitude(t);
        return m * m.adjoint();
    }
    // Sparse columns: group terms by their large-side id.
    std::vector<std::size_t> start(other + 1, 0);
    for (auto c : col) ++start[c + 1];
    for (std::size_t c = 0; c < other; ++c) start[c + 1] += start[c];
    std::vector<std::size_t> fill(start.begin(), start.end() - 1), members(s.size());
    for (std::size_t t = 0; t < s.size(); ++t) members[fill[col[t]]++] = t;
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t c = 0; c < other; ++c)
        for (std::size_t x = start[c]; x < start[c + 1]; ++x)
            for (std::size_t y = start[c]; y < start[c + 1]; ++y)
                gram(row[members[x]], row[members[y]]) +=
                    s.amplitude(members[x]) * std::conj(s.amplitude(members[y]));
    return gram;
}

std::vector<double> spectrum_of(const SparseState& s, const std::vector<std::string>& keep) {
    if (s.empty()) throw ValidationError("spectrum of the empty state");
    Bipartition bp(s.layout(), keep);
    const Eigen::MatrixXcd gram = reduced_gram(s, bp);
    const double tr = gram.trace().real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram / tr, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

} // namespace

SparseState lift(const SparseState& state, const ClassicalMap& map, const LiftOptions& options) {
    const Layout& layout = state.layout();
    return lift(
        state, layout,
        [&](std::span<const Value> in, std::span<Value> out) {
            std::copy(in.begin(), in.end(), out.begin());
            map(out);
        },
        options);
}

SparseState lift(const SparseState& state, const Layout& out_layout, const ClassicalRemap& map,
                 const LiftOptions& options) {
    const Layout& in_layout = state.layout();
    TermAccumulator acc(out_layout);
    acc.resize(state.size());
    for_chunks(state.size(), options.threads, [&](std::size_t lo, std::size_t hi) {
        IntList in(in_layout.value_count()), out(out_layout.value_count());
        for (std::size_t t = lo; t < hi; ++t) {
            state.values(t, in);
            std::fill(out.begin(), out.end(), 0);
            map(in, out);
            if (!out_layout.in_range(out))
                throw ValidationError("lifted map left register range: " + in_layout.describe(in) + " -> " +
                                      out_layout.describe(out));
            acc.set(t, out, state.amplitude(t), t);
        }
    });
    const double before = state.norm_squared();
    auto result = acc.distinct([&](std::size_t t) { return in_layout.describe(state.values(t)); },
                               state.pruned_mass());
    check_norm(before, result.norm_squared(), 1e-12, "lift");
    return result;
}

SparseState superpose(const SparseState& state, const BranchMap& branches, double tolerance) {
    const Layout& layout = state.layout();
    TermAccumulator acc(layout);
    acc.reserve(state.size());
    VectorSink sink(layout.value_count());
    IntList in(layout.value_count());
    for (std::size_t t = 0; t < state.size(); ++t) {
        state.values(t, in);
        sink.clear();
        branches(in, sink);
        double w2 = 0.0;
        for (const auto& w : sink.weights) w2 += std::norm(w);
        diagnostics::count_norm_check();
        if (std::abs(w2 - 1.0) > tolerance) {
            diagnostics::count_violation();
            throw ValidationError("branch weights for " + layout.describe(in) + " have squared norm " +
                                  std::to_string(w2));
        }
        const Amplitude a = state.amplitude(t);
        for (std::size_t k = 0; k < sink.weights.size(); ++k)
            acc.add(std::span<const Value>(sink.flat.data() + k * sink.width, sink.width), a * sink.weights[k], t);
    }
    const double before = state.norm_squared();
    auto out = acc.sum(state.pruned_mass());
    check_norm(before, out.norm_squared() + (out.pruned_mass() - state.pruned_mass()), tolerance, "superpose");
    return out;
}

SparseState prepare(const SparseState& state, const RegisterPreparation& prep, double tolerance) {
    const Layout& layout = state.layout();
    const std::size_t off = layout.offset(prep.target);
    const std::size_t arity = layout.spec(prep.target).arity;
    return superpose(
        state,
        [&](std::span<const Value> in, BranchSink& sink) {
            for (std::size_t k = 0; k < arity; ++k)
                if (in[off + k] != 0)
                    throw ValidationError("register '" + prep.target + "' is not zero in " + layout.describe(in));
            IntList out(in.begin(), in.end());
            prep.branches(in, [&](std::span<const Value> contents, Amplitude w) {
                if (contents.size() != arity) throw ValidationError("preparation emitted wrong register size");
                std::copy(contents.begin(), contents.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
                sink.emit(out, w);
            });
        },
        tolerance);
}

ProjectionResult unprepare(const SparseState& state, const RegisterPreparation& prep) {
    const Layout& layout = state.layout();
    const std::size_t off = layout.offset(prep.target);
    const std::size_t arity = layout.spec(prep.target).arity;
    TermAccumulator acc(layout);
    acc.reserve(state.size());
    IntList flat(layout.value_count()), contents(arity);
    for (std::size_t t = 0; t < state.size(); ++t) {
        state.values(t, flat);
        for (std::size_t k = 0; k < arity; ++k) {
            contents[k] = flat[off + k];
            flat[off + k] = 0;
        }
        const Amplitude w = prep.amplitude(flat, contents);
        if (w != Amplitude(0.0)) acc.add(flat, std::conj(w) * state.amplitude(t), t);
    }
    const double before = state.norm_squared();
    ProjectionResult r{acc.sum(state.pruned_mass()), 1.0};
    r.kept_fraction = before > 0 ? r.state.norm_squared() / before : 1.0;
    diagnostics::count_norm_check();
    if (r.kept_fraction > 1.0 + 1e-9) diagnostics::fail("unprepare increased the norm; preparation is not an isometry");
    return r;
}

ProjectionResult project(const SparseState& state, const std::function<bool(std::span<const Value>)>& keep) {
    TermAccumulator acc(state.layout());
    IntList flat(state.layout().value_count());
    for (std::size_t t = 0; t < state.size(); ++t) {
        state.values(t, flat);
        if (keep(flat)) acc.add(flat, state.amplitude(t), t);
    }
    const double before = state.norm_squared();
    ProjectionResult r{acc.sum(state.pruned_mass()), 1.0};
    r.kept_fraction = before > 0 ? r.state.norm_squared() / before : 1.0;
    return r;
}

SparseState tensor(const SparseState& a, const SparseState& b) {
    std::vector<RegisterSpec> regs = a.layout().registers();
    for (const auto& r : b.layout().registers()) regs.push_back(r);
    Layout layout(regs);
    TermAccumulator acc(layout);
    acc.reserve(a.size() * b.size());
    const std::size_t na = a.layout().value_count();
    IntList flat(layout.value_count());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a.values(i, std::span<Value>(flat.data(), na));
        for (std::size_t j = 0; j < b.size(); ++j) {
            b.values(j, std::span<Value>(flat.data() + na, flat.size() - na));
            acc.add(flat, a.amplitude(i) * b.amplitude(j));
        }
    }
    return acc.sum(a.pruned_mass() + b.pruned_mass());
}

SparseState add_register(const SparseState& state, RegisterSpec spec, const IntList& contents) {
    IntList fill = contents.empty() ? IntList(spec.arity, 0) : contents;
    if (fill.size() != spec.arity) throw ValidationError("initial contents do not match register arity");
    const Layout out = state.layout().with(spec);
    const std::size_t n = state.layout().value_count();
    return lift(state, out, [&](std::span<const Value> in, std::span<Value> o) {
        std::copy(in.begin(), in.end(), o.begin());
        std::copy(fill.begin(), fill.end(), o.begin() + static_cast<std::ptrdiff_t>(n));
    });
}

ProjectionResult release_register(const SparseState& state, std::string_view name, const IntList& clean,
                                  double tolerance) {
    const Layout& layout = state.layout();
    const std::size_t r = layout.index_of(name);
    const std::size_t off = layout.offset(r);
    const std::size_t arity = layout.registers()[r].arity;
    IntList expect = clean.empty() ? IntList(arity, 0) : clean;
    if (expect.size() != arity) throw ValidationError("clean value does not match register arity");
    const Layout out = layout.without(name);
    TermAccumulator acc(out);
    acc.reserve(state.size());
    IntList flat(layout.value_count()), rest;
    double dirty = 0.0, total = 0.0;
    std::string first_dirty;
    for (std::size_t t = 0; t < state.size(); ++t) {
        state.values(t, flat);
        total += std::norm(state.amplitude(t));
        if (!std::equal(expect.begin(), expect.end(), flat.begin() + static_cast<std::ptrdiff_t>(off))) {
            dirty += std::norm(state.amplitude(t));
            if (first_dirty.empty()) first_dirty = layout.describe(flat);
            continue;
        }
        rest.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(off));
        rest.insert(rest.end(), flat.begin() + static_cast<std::ptrdiff_t>(off + arity), flat.end());
        acc.add(rest, state.amplitude(t), t);
    }
    diagnostics::count_ancilla_check();
    const double frac = total > 0 ? dirty / total : 0.0;
    if (frac > tolerance)
        diagnostics::fail("register '" + std::string(name) + "' is not clean (mass " + std::to_string(frac) +
                          " outside " + to_string(expect) + ", e.g. " + first_dirty + ")");
    ProjectionResult res{acc.sum(state.pruned_mass()), 1.0 - frac};
    return res;
}

SparseState rename_register(const SparseState& state, std::string_view from, std::string to) {
    auto regs = state.layout().registers();
    regs[state.layout().index_of(from)].name = std::move(to);
    SparseState out = state;
    out.layout_ = Layout(regs);
    return out;
}

Amplitude inner(const SparseState& a, const SparseState& b) {
    if (!(a.layout() == b.layout())) throw ValidationError("inner product of states with different layouts");
    const std::size_t w = a.layout().words();
    Amplitude acc = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const auto* ka = a.key(i);
        const auto* kb = b.key(j);
        int c = 0;
        for (std::size_t x = 0; x < w && c == 0; ++x)
            if (ka[x] != kb[x]) c = ka[x] < kb[x] ? -1 : 1;
        if (c == 0) {
            acc += std::conj(a.amplitude(i)) * b.amplitude(j);
            ++i;
            ++j;
        } else if (c < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    return acc;
}

double fidelity(const SparseState& a, const SparseState& b) {
    const double na = a.norm_squared(), nb = b.norm_squared();
    if (na <= 0 || nb <= 0) return 0.0;
    return std::norm(inner(a, b)) / (na * nb);
}

std::map<IntList, double> distribution(const SparseState& state, std::string_view name) {
    if (state.empty()) throw ValidationError("distribution of the empty state");
    const Layout& layout = state.layout();
    const std::size_t off = layout.offset(name);
    const std::size_t arity = layout.spec(name).arity;
    std::map<IntList, double> dist;
    IntList flat(layout.value_count());
    const double total = state.norm_squared();
    for (std::size_t t = 0; t < state.size(); ++t) {
        state.values(t, flat);
        IntList v(flat.begin() + static_cast<std::ptrdiff_t>(off),
                  flat.begin() + static_cast<std::ptrdiff_t>(off + arity));
        dist[v] += std::norm(state.amplitude(t)) / total;
    }
    return dist;
}

Measurement measure_register(const SparseState& state, std::string_view name, std::uint64_t seed) {
    const auto dist = distribution(state, name);
    std::mt19937_64 rng(seed);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    IntList outcome = dist.rbegin()->first;
    for (const auto& [v, p] : dist) {
        acc += p;
        if (u < acc) {
            outcome = v;
            break;
        }
    }
    const Layout& layout = state.layout();
    const std::size_t off = layout.offset(name);
    TermAccumulator acc_terms(layout);
    IntList flat(layout.value_count());
    for (std::size_t t = 0; t < state.size(); ++t) {
        state.values(t, flat);
        if (std::equal(outcome.begin(), outcome.end(), flat.begin() + static_cast<std::ptrdiff_t>(off)))
            acc_terms.add(flat, state.amplitude(t), t);
    }
    return {outcome, acc_terms.sum().normalized()};
}

std::vector<double> reduced_spectrum(const SparseState& state, const std::vector<std::string>& keep) {
    return spectrum_of(state, keep);
}

double entanglement_entropy(const SparseState& state, const std::vector<std::string>& keep) {
    double h = 0.0;
    for (double p : spectrum_of(state, keep))
        if (p > 1e-300) h -= p * std::log(p);
    return std::max(0.0, h);
}

double reduced_fidelity(const SparseState& state, const std::vector<std::string>& keep, const SparseState& target) {
    Bipartition bp(state.layout(), keep);
    if (!(bp.a_layout == target.layout())) throw ValidationError("target layout does not match kept registers");
    // <t| rho_A |t> = sum_b |sum_a conj(t_a) psi(a,b)|^2
    std::unordered_map<IntList, Amplitude, KeyHash> per_b;
    IntList flat(state.layout().value_count()), a(bp.a_pos.size()), b(bp.b_pos.size());
    for (std::size_t t = 0; t < state.size(); ++t) {
        state.values(t, flat);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = flat[bp.a_pos[i]];
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = flat[bp.b_pos[i]];
        const Amplitude ta = target.amplitude_of_flat(a);
        if (ta != Amplitude(0.0)) per_b[b] += std::conj(ta) * state.amplitude(t);
    }
    double f = 0.0;
    for (const auto& [k, v] : per_b) f += std::norm(v);
    return f / (state.norm_squared() * target.norm_squared());
}

FactorResult factor_out(const SparseState& state, const std::vector<std::string>& keep, double tolerance) {
    if (state.empty()) throw ValidationError("cannot factor the empty state");
    Bipartition bp(state.layout(), keep);
    FactorResult res;
    res.entropy = entanglement_entropy(state, keep);
    diagnostics::count_ancilla_check();
    if (res.entropy > tolerance)
        diagnostics::fail("registers are entangled with the rest (entropy " + std::to_string(res.entropy) + ")");
    // For a product state every B-column is proportional to the A factor;
    // use the column of the largest amplitude for numerical stability.
    std::size_t best = 0;
    for (std::size_t t = 1; t < state.size(); ++t)
        if (std::abs(state.amplitude(t)) > std::abs(state.amplitude(best)) + 1e-15) best = t;
    IntList flat(state.layout().value_count()), a(bp.a_pos.size()), b_best(bp.b_pos.size()), b(bp.b_pos.size());
    state.values(best, flat);
    for (std::size_t i = 0; i < b.size(); ++i) b_best[i] = flat[bp.b_pos[i]];
    TermAccumulator acc(bp.a_layout);
    const Amplitude phase = std::conj(state.amplitude(best)) / std::abs(state.amplitude(best));
    for (std::size_t t = 0; t < state.size(); ++t) {
        state.values(t, flat);
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = flat[bp.b_pos[i]];
        if (b != b_best) continue;
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = flat[bp.a_pos[i]];
        acc.add(a, state.amplitude(t) * phase, t);
    }
    res.kept = acc.sum().normalized();
    IntList a_best(bp.a_pos.size());
    state.values(best, flat);
    for (std::size_t i = 0; i < a.size(); ++i) a_best[i] = flat[bp.a_pos[i]];
    TermAccumulator rest(bp.b_layout);
    for (std::size_t t = 0; t < state.size(); ++t) {
        state.values(t, flat);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = flat[bp.a_pos[i]];
        if (a != a_best) continue;
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = flat[bp.b_pos[i]];
        rest.add(b, state.amplitude(t) * phase, t);
    }
    res.rest = rest.sum().normalized();
    return res;
}

} // namespace qsym

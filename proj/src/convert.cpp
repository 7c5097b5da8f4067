#include "qsym/convert.hpp"

#include <numeric>

#include "qsym/diagnostics.hpp"
#include "qsym/permutation.hpp"
#include "qsym/prefix_scan.hpp"

namespace qsym {

namespace {

using Triples = std::vector<Triple>;

// Shared state of one run through the stage chain.
class Pipeline {
public:
    Pipeline(std::size_t m, std::size_t n, NetworkKind kind, DepthReport* depth, ConversionTrace* trace)
        : m_(static_cast<Value>(m)),
          net_(cached_network(kind, m + n)),
          w2_(mode_major(m_)),
          w3_(slot_major()),
          inter_(mode_interleave(m_)),
          depth_(depth),
          trace_(trace) {}

    Value m() const { return m_; }
    const ComparisonRule& w2() const { return w2_; }
    const ComparisonRule& w3() const { return w3_; }
    const ComparisonRule& inter() const { return inter_; }

    void stage(const char* name, const ComparisonRule& rule, const Triples& t) const {
        IntList flat = flatten(t);
        if (!is_sorted_under(tuple_view(flat, 3), rule))
            diagnostics::fail(std::string("stage ") + name + " is not sorted under " + rule.name() + ": " +
                              to_string(flat));
        if (trace_) trace_->stages.push_back({name, rule.name(), t});
    }

    Triples resort(const Triples& t, const ComparisonRule& from, const ComparisonRule& to) const {
        const IntList out = revsort(*net_, from, to, flatten(t), depth_);
        Triples r(t.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = {out[3 * i], out[3 * i + 1], out[3 * i + 2]};
        return r;
    }

    // One layer of element-local arithmetic.
    void local_step() const {
        if (depth_) depth_->elementary_layers += 1;
    }

private:
    static IntList flatten(const Triples& t) {
        IntList f;
        f.reserve(3 * t.size());
        for (const auto& x : t) f.insert(f.end(), x.begin(), x.end());
        return f;
    }

    Value m_;
    std::shared_ptr<const SortingNetwork> net_;
    ComparisonRule w2_, w3_, inter_;
    DepthReport* depth_;
    ConversionTrace* trace_;
};

void expect(bool ok, const std::string& what) {
    diagnostics::count_ancilla_check();
    if (!ok) diagnostics::fail("conversion scaffolding check failed: " + what);
}

} // namespace

IntList occ_to_nsil(const IntList& occ, DepthReport* depth, ConversionTrace* trace, NetworkKind network) {
    const std::size_t m = occ.size();
    if (m == 0) throw ValidationError("occupation vector needs at least one mode");
    Value total = 0;
    for (Value x : occ) {
        if (x < 0) throw ValidationError("occupation numbers must be non-negative");
        total += x;
    }
    if (total == 0) throw ValidationError("occupation vector holds no particles");
    const std::size_t n = static_cast<std::size_t>(total);
    Pipeline p(m, n, network, depth, trace);
    const Value M = p.m();

    const IntList prefix = prefix_sums(occ, depth);
    Triples w;
    for (std::size_t i = 0; i < m; ++i) w.push_back({static_cast<Value>(i), occ[i], prefix[i]});
    p.stage("W1", p.w2(), w);
    for (std::size_t j = 0; j < n; ++j) w.push_back({M, 0, static_cast<Value>(j)});
    p.stage("W2", p.w2(), w);

    w = p.resort(w, p.w2(), p.w3());
    p.stage("W3", p.w3(), w);
    // The k-th entry, if added, sits after exactly (k - index) mode entries.
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k][0] == M) w[k][1] += static_cast<Value>(k) - w[k][2];
    p.local_step();
    p.stage("W4", p.w3(), w);

    w = p.resort(w, p.w3(), p.w2());
    p.stage("W5", p.w2(), w);
    // Mode entries now lead in mode order; n_i is the gap to the previous
    // prefix sum.
    for (std::size_t i = 0; i < m; ++i) {
        expect(w[i][0] == static_cast<Value>(i), "mode entry out of place in W5");
        w[i][1] -= w[i][2] - (i ? w[i - 1][2] : 0);
        expect(w[i][1] == 0, "occupation not cleared in W6");
    }
    p.local_step();
    p.stage("W6", p.w2(), w);

    w = p.resort(w, p.w2(), p.w3());
    p.stage("W7", p.w3(), w);
    // Mode i sits at position S_i + i.
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k][0] < M) {
            w[k][2] -= static_cast<Value>(k) - w[k][0];
            expect(w[k][2] == 0, "prefix sum not cleared in W8");
        }
    p.local_step();
    p.stage("W8", p.inter(), w);

    w = p.resort(w, p.inter(), p.w2());
    p.stage("Wf", p.w2(), w);
    IntList out(n);
    for (std::size_t i = 0; i < m; ++i)
        expect(w[i] == Triple{static_cast<Value>(i), 0, 0}, "mode entry not reduced to a constant");
    for (std::size_t j = 0; j < n; ++j) {
        const Triple& t = w[m + j];
        expect(t[0] == M && t[2] == static_cast<Value>(j), "added entry out of place in Wf");
        out[j] = t[1];
    }
    p.local_step();
    diagnostics::count_sortedness_check();
    if (!is_nsil(out)) diagnostics::fail("converter output is not an NSIL: " + to_string(out));
    return out;
}

IntList nsil_to_occ(const IntList& nsil, std::size_t m, DepthReport* depth, ConversionTrace* trace,
                    NetworkKind network) {
    if (m == 0) throw ValidationError("need at least one mode");
    if (nsil.empty()) throw ValidationError("mode list holds no particles");
    require_nsil(nsil);
    for (Value v : nsil)
        if (v < 0 || v >= static_cast<Value>(m))
            throw ValidationError("mode " + std::to_string(v) + " outside [0, " + std::to_string(m) + ")");
    const std::size_t n = nsil.size();
    Pipeline p(m, n, network, depth, trace);
    const Value M = p.m();

    Triples w;
    for (std::size_t i = 0; i < m; ++i) w.push_back({static_cast<Value>(i), 0, 0});
    for (std::size_t j = 0; j < n; ++j) w.push_back({M, nsil[j], static_cast<Value>(j)});
    p.stage("Wf", p.w2(), w);

    w = p.resort(w, p.w2(), p.inter());
    p.stage("W8", p.inter(), w);
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k][0] < M) w[k][2] += static_cast<Value>(k) - w[k][0];
    p.local_step();
    p.stage("W7", p.w3(), w);

    w = p.resort(w, p.w3(), p.w2());
    p.stage("W6", p.w2(), w);
    for (std::size_t i = 0; i < m; ++i) {
        expect(w[i][0] == static_cast<Value>(i), "mode entry out of place in W6");
        w[i][1] += w[i][2] - (i ? w[i - 1][2] : 0);
    }
    p.local_step();
    p.stage("W5", p.w2(), w);

    w = p.resort(w, p.w2(), p.w3());
    p.stage("W4", p.w3(), w);
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k][0] == M) {
            w[k][1] -= static_cast<Value>(k) - w[k][2];
            expect(w[k][1] == 0, "mode label not cleared in W3");
        }
    p.local_step();
    p.stage("W3", p.w3(), w);

    w = p.resort(w, p.w3(), p.w2());
    p.stage("W2", p.w2(), w);
    for (std::size_t j = 0; j < n; ++j)
        expect(w[m + j] == Triple{M, 0, static_cast<Value>(j)}, "added entry not reduced to a constant");
    w.resize(m);
    p.stage("W1", p.w2(), w);

    IntList occ(m);
    for (std::size_t i = 0; i < m; ++i) occ[i] = w[i][1];
    const IntList prefix = prefix_sums(occ, depth);
    for (std::size_t i = 0; i < m; ++i) expect(w[i][2] == prefix[i], "prefix column does not uncompute");
    return occ;
}

SparseState occupation_state(const std::vector<std::pair<IntList, Amplitude>>& terms) {
    if (terms.empty()) throw ValidationError("occupation state needs at least one term");
    const std::size_t m = terms.front().first.size();
    Value n = -1;
    std::vector<std::pair<BasisConfig, Amplitude>> cfg;
    for (const auto& [occ, a] : terms) {
        if (occ.size() != m) throw ValidationError("all occupation vectors need the same number of modes");
        const Value total = std::accumulate(occ.begin(), occ.end(), Value{0});
        if (n >= 0 && total != n) throw ValidationError("inconsistent particle number across the superposition");
        n = total;
        cfg.push_back({{occ}, a});
    }
    return SparseState::from_terms(Layout({{reg::occ, m, n + 1}}), cfg);
}

SparseState second_to_first(const SparseState& state, const SymmetrizeOptions& options, DepthReport* depth) {
    const Layout& in = state.layout();
    if (!in.contains(reg::occ)) throw ValidationError("state has no 'occ' register");
    if (state.empty()) throw ValidationError("empty state");
    const std::size_t m = in.spec(reg::occ).arity, off = in.offset(reg::occ);
    const IntList first = state.config(0)[in.index_of(reg::occ)];
    const Value n = std::accumulate(first.begin(), first.end(), Value{0});
    if (n <= 0) throw ValidationError("occupation vector holds no particles");

    auto regs = in.registers();
    regs[in.index_of(reg::occ)] = {reg::data, static_cast<std::size_t>(n), std::max<Value>(static_cast<Value>(m), 2)};
    const Layout out(regs);
    const std::size_t doff = out.offset(reg::data);
    DepthReport d;
    occ_to_nsil(first, &d, nullptr, options.network);
    SparseState w = lift(state, out, [&](std::span<const Value> x, std::span<Value> y) {
        IntList occ(x.begin() + static_cast<std::ptrdiff_t>(off), x.begin() + static_cast<std::ptrdiff_t>(off + m));
        if (std::accumulate(occ.begin(), occ.end(), Value{0}) != n)
            throw ValidationError("inconsistent particle number across the superposition: " + to_string(occ));
        const IntList l = occ_to_nsil(occ, nullptr, nullptr, options.network);
        std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(off), y.begin());
        std::copy(l.begin(), l.end(), y.begin() + static_cast<std::ptrdiff_t>(doff));
        std::copy(x.begin() + static_cast<std::ptrdiff_t>(off + m), x.end(),
                  y.begin() + static_cast<std::ptrdiff_t>(doff) + n);
    });
    auto r = nsil_symmetrize_superposed(w, options);
    d += r.depth;
    add_depth(depth, d);
    return r.state;
}

SparseState first_to_second(const SparseState& state, std::size_t m, const SymmetrizeOptions& options,
                            DepthReport* depth) {
    const Layout& in = state.layout();
    if (!in.contains(reg::data)) throw ValidationError("state has no 'data' register");
    if (m == 0) throw ValidationError("need at least one mode");
    const std::size_t n = in.spec(reg::data).arity;
    if (n == 0) throw ValidationError("mode list holds no particles");
    auto r = nsil_unsymmetrize_superposed(state, options);
    DepthReport d = r.depth;
    const Layout& mid = r.state.layout();
    const std::size_t off = mid.offset(reg::data);
    auto regs = mid.registers();
    regs[mid.index_of(reg::data)] = {reg::occ, m, static_cast<Value>(n) + 1};
    const Layout out(regs);
    const std::size_t ooff = out.offset(reg::occ);
    SparseState w = lift(r.state, out, [&](std::span<const Value> x, std::span<Value> y) {
        const IntList occ = nsil_to_occ(IntList(x.begin() + static_cast<std::ptrdiff_t>(off),
                                                x.begin() + static_cast<std::ptrdiff_t>(off + n)),
                                        m, nullptr, nullptr, options.network);
        std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(off), y.begin());
        std::copy(occ.begin(), occ.end(), y.begin() + static_cast<std::ptrdiff_t>(ooff));
        std::copy(x.begin() + static_cast<std::ptrdiff_t>(off + n), x.end(),
                  y.begin() + static_cast<std::ptrdiff_t>(ooff + m));
    });
    if (!r.state.empty()) nsil_to_occ(IntList(n, 0), m, &d, nullptr, options.network);
    add_depth(depth, d);
    return w;
}

} // namespace qsym

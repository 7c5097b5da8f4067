#include <cmath>

#include "qsym/diagnostics.hpp"
#include "qsym/permutation.hpp"
#include "qsym/sorting_ops.hpp"
#include "qsym/symmetrize.hpp"

namespace qsym {

namespace {

// Visits every vector in [0, base)^n.
template <class Visit>
void odometer(std::size_t n, Value base, Visit&& visit) {
    IntList v(n, 0);
    while (true) {
        visit(std::span<const Value>(v));
        std::size_t i = n;
        while (i > 0 && ++v[i - 1] == base) v[--i] = 0;
        if (i == 0) return;
    }
}

// Number of distinct values if v uses exactly {0, ..., d-1}, else 0.
std::size_t dense_levels(std::span<const Value> v) {
    std::vector<bool> used(v.size() + 1, false);
    Value top = -1;
    for (Value x : v) {
        if (x < 0 || x >= static_cast<Value>(v.size())) return 0;
        used[static_cast<std::size_t>(x)] = true;
        top = std::max(top, x);
    }
    for (Value x = 0; x <= top; ++x)
        if (!used[static_cast<std::size_t>(x)]) return 0;
    return static_cast<std::size_t>(top + 1);
}

// sqrt(C(f, d) / f^n): the share of [f]^n with a given order pattern of d levels.
double pattern_amplitude(std::uint64_t f, std::size_t n, std::size_t d) {
    if (d > f) return 0.0;
    const double fd = static_cast<double>(f);
    const double log_choose = std::lgamma(fd + 1) - std::lgamma(static_cast<double>(d) + 1) -
                              std::lgamma(fd - static_cast<double>(d) + 1);
    return std::exp(0.5 * (log_choose - static_cast<double>(n) * std::log(fd)));
}

bool has_repeat(std::span<const Value> sorted) {
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] == sorted[i - 1]) return true;
    return false;
}

RegisterPreparation random_preparation(std::size_t n, std::uint64_t f, bool compress) {
    RegisterPreparation prep;
    prep.target = reg::random;
    if (compress) {
        prep.branches = [n, f](std::span<const Value>,
                               const std::function<void(std::span<const Value>, Amplitude)>& emit) {
            odometer(n, static_cast<Value>(n), [&](std::span<const Value> v) {
                if (const std::size_t d = dense_levels(v)) {
                    const double a = pattern_amplitude(f, n, d);
                    if (a > 0) emit(v, a);
                }
            });
        };
        prep.amplitude = [n, f](std::span<const Value>, std::span<const Value> v) -> Amplitude {
            const std::size_t d = dense_levels(v);
            return d ? pattern_amplitude(f, n, d) : 0.0;
        };
    } else {
        const double a = std::pow(static_cast<double>(f), -0.5 * static_cast<double>(n));
        prep.branches = [n, f, a](std::span<const Value>,
                                  const std::function<void(std::span<const Value>, Amplitude)>& emit) {
            odometer(n, static_cast<Value>(f), [&](std::span<const Value> v) { emit(v, a); });
        };
        prep.amplitude = [a](std::span<const Value>, std::span<const Value>) -> Amplitude { return a; };
    }
    return prep;
}

} // namespace

std::uint64_t BerryConfig::range(std::size_t n) const {
    if (f_n) return f_n;
    if (!(a >= 2.0)) throw ValidationError("Berry exponent a must be at least 2");
    const double v = std::pow(static_cast<double>(n), a);
    const double r = std::round(v);
    const double f = std::abs(v - r) <= 1e-9 * std::max(1.0, v) ? r : std::ceil(v);
    return static_cast<std::uint64_t>(std::max(1.0, f));
}

BerryResult berry_sil_symmetrize(const SparseState& state, const BerryConfig& cfg, NetworkKind network,
                                 DepthReport* depth) {
    if (!state.layout().contains(reg::data)) throw ValidationError("state has no 'data' register");
    const std::size_t n = state.layout().spec(reg::data).arity;
    if (n == 0) throw ValidationError("cannot symmetrize an empty list");
    {
        const std::size_t off = state.layout().offset(reg::data);
        IntList flat(state.layout().value_count());
        for (std::size_t t = 0; t < state.size(); ++t) {
            state.values(t, flat);
            if (!is_sil(std::span<const Value>(flat.data() + off, n)))
                throw ValidationError("Berry symmetrization needs an SIL on every term, got " +
                                      state.layout().describe(flat));
        }
    }
    const std::uint64_t f = cfg.range(n);
    if (f < n * n)
        throw ValidationError("padding range f_n=" + std::to_string(f) + " is below n^2=" + std::to_string(n * n));
    if (!cfg.compress && std::pow(static_cast<double>(f), static_cast<double>(n)) > 4e6)
        throw ValidationError("uncompressed random register too large (f_n^n above 4e6)");
    if (cfg.compress && n > 8) throw ValidationError("compressed random register supports n <= 8");

    BerryResult result;
    result.f_n = f;
    result.fidelity_bound = std::max(0.0, 1.0 - static_cast<double>(n * n) / (2.0 * static_cast<double>(f)));
    const auto net = cached_network(network, n);
    DepthReport d;
    const Value rbound = cfg.compress ? static_cast<Value>(n) : static_cast<Value>(f);
    SparseState w = add_register(state, {reg::random, n, rbound});
    w = prepare(w, random_preparation(n, f, cfg.compress));
    d.elementary_layers += 1;
    w = add_register(w, record_register(reg::record, *net));
    d.note_ancillas(w.layout().register_qubits(reg::random) + w.layout().register_qubits(reg::record));
    w = sort_op(w, {reg::random}, reg::record, *net, ascending(), &d);

    const std::size_t roff = w.layout().offset(reg::random);
    auto distinct = [roff, n](std::span<const Value> flat) { return !has_repeat(flat.subspan(roff, n)); };
    ProjectionResult ok = project(w, distinct);
    result.success_probability = ok.kept_fraction;
    result.repetitive_probability = 1.0 - ok.kept_fraction;

    if (cfg.postselect) {
        if (ok.state.empty()) throw ValidationError("postselection on the distinct branch failed (probability 0)");
        // On the distinct branch the sorted padding values are independent
        // of the record; the product check confirms it before discarding.
        std::vector<std::string> keep;
        for (const auto& r : ok.state.layout().registers())
            if (r.name != reg::random) keep.push_back(r.name);
        w = factor_out(ok.state.normalized(), keep).kept;
        w = unsort_op(w, {reg::data}, reg::record, *net, ascending(), &d);
        w = release_register(w, reg::record).state;
        result.state = w.normalized();
    } else {
        w = unsort_op(w, {reg::data}, reg::record, *net, ascending(), &d);
        if (cfg.seed) {
            Measurement m = measure_register(w, reg::random, *cfg.seed);
            result.measured = m.outcome;
            result.state = release_register(m.post, reg::random, m.outcome).state;
        } else {
            result.state = std::move(w);
        }
    }
    add_depth(depth, d);
    return result;
}

} // namespace qsym

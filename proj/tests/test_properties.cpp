#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qsym/convert.hpp"
#include "qsym/les.hpp"
#include "qsym/sorting_ops.hpp"
#include "qsym/symmetrize.hpp"

using namespace qsym;

namespace {

// A random superposition of NSILs of length n (values in [0, top]).
SparseState random_nsil_state(std::mt19937_64& rng, std::size_t n, Value top, std::size_t terms,
                              std::vector<std::pair<IntList, Amplitude>>* out_terms = nullptr) {
    std::vector<std::pair<IntList, Amplitude>> t;
    for (std::size_t i = 0; i < terms; ++i) t.push_back({oracle::random_nsil(rng, n, top), oracle::random_amp(rng)});
    const auto s = list_superposition(t, top + 1).normalized();
    if (out_terms) {
        out_terms->clear();
        for (std::size_t i = 0; i < s.size(); ++i) out_terms->push_back({s.values(i), s.amplitude(i)});
    }
    return s;
}

SparseState permute_data(const SparseState& s, const Permutation& p) {
    return lift(s, [&](std::span<Value> f) {
        const IntList l(f.begin(), f.end());
        const IntList q = qsym::apply(p, l);
        std::copy(q.begin(), q.end(), f.begin());
    });
}

} // namespace

TEST_SUITE("properties") {
    TEST_CASE("superposed symmetrization matches the oracle on random inputs") {
        std::mt19937_64 rng(101);
        for (int rep = 0; rep < 40; ++rep) {
            const std::size_t n = 1 + rng() % 5;
            std::vector<std::pair<IntList, Amplitude>> terms;
            const auto in = random_nsil_state(rng, n, 1 + static_cast<Value>(rng() % 4), 1 + rng() % 4, &terms);
            SymmetrizeOptions o;
            o.network = rng() % 2 ? NetworkKind::bitonic : NetworkKind::bubble;
            const auto r = nsil_symmetrize_superposed(in, o);
            REQUIRE(oracle::distance(oracle::to_map(r.state), oracle::symmetrize(terms)) < 1e-12);
            REQUIRE(r.clean_mass > 1 - 1e-12);
        }
    }

    TEST_CASE("symmetrized states are invariant under every permutation") {
        std::mt19937_64 rng(102);
        for (int rep = 0; rep < 15; ++rep) {
            const std::size_t n = 2 + rng() % 3;
            const auto out = nsil_symmetrize_superposed(random_nsil_state(rng, n, 3, 3)).state;
            for (const auto& p : all_permutations(n))
                REQUIRE(oracle::distance(oracle::to_map(permute_data(out, p)), oracle::to_map(out)) < 1e-12);
        }
    }

    TEST_CASE("SORT then UNSORT is the identity for any list") {
        std::mt19937_64 rng(103);
        for (int rep = 0; rep < 40; ++rep) {
            const std::size_t n = 1 + rng() % 7;
            const auto net = build_network(rng() % 2 ? NetworkKind::bitonic : NetworkKind::bubble, n);
            Layout l({{"data", n, 6}, {"rec", net.comparator_count(), 2}});
            TermAccumulator acc(l);
            for (int k = 0; k < 5; ++k) {
                IntList flat(l.value_count(), 0);
                for (std::size_t i = 0; i < n; ++i) flat[i] = static_cast<Value>(rng() % 6);
                acc.add(flat, oracle::random_amp(rng));
            }
            const auto s = acc.sum();
            const auto sorted = sort_op(s, {"data"}, "rec", net, ascending());
            for (std::size_t t = 0; t < sorted.size(); ++t) {
                const IntList v = sorted.values(t);
                REQUIRE(std::is_sorted(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)));
            }
            const auto back = unsort_op(sorted, {"data"}, "rec", net, ascending());
            REQUIRE(oracle::distance(oracle::to_map(back), oracle::to_map(s)) == 0.0);
        }
    }

    TEST_CASE("LES bijection round trips on random permutations") {
        std::mt19937_64 rng(104);
        for (int rep = 0; rep < 300; ++rep) {
            const std::size_t n = 1 + rng() % 24;
            const Permutation p(oracle::random_perm(rng, n));
            const auto s = perm_to_les(p);
            REQUIRE(is_les(s));
            REQUIRE(les_to_perm_parallel(s) == p);
        }
    }

    TEST_CASE("single-input outputs factor and match the oracle") {
        std::mt19937_64 rng(105);
        for (int rep = 0; rep < 20; ++rep) {
            const std::size_t n = 1 + rng() % 5;
            const IntList l = oracle::random_nsil(rng, n, 3);
            const auto r = nsil_symmetrize_single(l);
            REQUIRE(r.entropy < 1e-9);
            REQUIRE(oracle::distance(oracle::to_map(r.state), oracle::symmetrize(l)) < 1e-12);
            REQUIRE(r.platform.size() == oracle::stabilizer(l).size());
        }
    }

    TEST_CASE("converter round trips on random occupation vectors") {
        std::mt19937_64 rng(106);
        for (int rep = 0; rep < 200; ++rep) {
            const std::size_t m = 1 + rng() % 8;
            IntList occ(m);
            for (auto& v : occ) v = static_cast<Value>(rng() % 4);
            occ[rng() % m] += 1;
            const IntList l = occ_to_nsil(occ);
            REQUIRE(l == oracle::expand_occupations(occ));
            REQUIRE(nsil_to_occ(l, m) == occ);
        }
    }

    TEST_CASE("norm is preserved through the whole superposed chain") {
        std::mt19937_64 rng(107);
        for (int rep = 0; rep < 10; ++rep) {
            auto in = random_nsil_state(rng, 4, 4, 4);
            in.scale(0.5);
            const auto r = nsil_symmetrize_superposed(in);
            CHECK(r.state.norm_squared() == doctest::Approx(0.25).epsilon(1e-12));
        }
    }
}

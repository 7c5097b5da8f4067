#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qsym/diagnostics.hpp"
#include "qsym/les.hpp"
#include "qsym/symmetrize.hpp"

using namespace qsym;

namespace {

oracle::Vec data_map(const SparseState& s) {
    REQUIRE(s.layout().register_count() == 1);
    return oracle::to_map(s);
}

SparseState platform_oracle(const IntList& l) {
    std::vector<std::pair<BasisConfig, Amplitude>> terms;
    const auto h = oracle::stabilizer(l);
    for (const auto& p : h) terms.push_back({{p}, 1.0 / std::sqrt(double(h.size()))});
    return SparseState::from_terms(Layout({{reg::perm, l.size(), Value(l.size()) + 1}}), terms);
}

} // namespace

TEST_SUITE("symmetrize") {
    TEST_CASE("exact SIL symmetrization") {
        CHECK(oracle::distance(data_map(exact_sil_symmetrize(list_state({1, 2, 3}))), oracle::symmetrize({1, 2, 3})) <
              1e-12);
        const auto one = exact_sil_symmetrize(list_state({7}));
        CHECK(one.size() == 1);
        CHECK(std::abs(one.amplitude_of({{7}}) - 1.0) < 1e-12);
        const Amplitude a(0.6, 0.0), b(0.0, 0.8);
        const auto sup = list_superposition({{{1, 2}, a}, {{3, 4}, b}});
        CHECK(oracle::distance(data_map(exact_sil_symmetrize(sup)), oracle::symmetrize({{{1, 2}, a}, {{3, 4}, b}})) <
              1e-12);
        CHECK_THROWS_AS(exact_sil_symmetrize(list_state({1, 1})), ValidationError);
    }

    TEST_CASE("permutation resource is uniform and cached") {
        for (std::size_t n = 1; n <= 6; ++n) {
            const auto r = permutation_resource(n);
            CHECK(r->size() == oracle::fact(n));
            for (std::size_t t = 0; t < r->size(); ++t)
                CHECK(std::abs(r->amplitude(t) - 1.0 / std::sqrt(double(oracle::fact(n)))) < 1e-12);
            CHECK(permutation_resource(n).get() == r.get());
        }
    }

    TEST_CASE("single-input examples") {
        auto r = nsil_symmetrize_single({1, 2, 2});
        CHECK(r.state.size() == 3);
        CHECK(oracle::distance(data_map(r.state), oracle::symmetrize({1, 2, 2})) < 1e-12);
        r = nsil_symmetrize_single({1, 1, 1});
        CHECK(r.state.size() == 1);
        r = nsil_symmetrize_single({1, 2, 2, 3});
        CHECK(r.state.size() == 12);
        CHECK(r.entropy < 1e-9);
        CHECK(fidelity(r.platform, platform_oracle({1, 2, 2, 3})) > 1 - 1e-12);
        CHECK_THROWS_AS(nsil_symmetrize_single({2, 1}), ValidationError);
    }

    TEST_CASE("single-input output is the same under both networks") {
        SymmetrizeOptions bubble;
        bubble.network = NetworkKind::bubble;
        for (const IntList& l : {IntList{1, 1, 2}, IntList{0, 1, 1, 3, 3}}) {
            const auto a = nsil_symmetrize_single(l), b = nsil_symmetrize_single(l, bubble);
            CHECK(oracle::distance(data_map(a.state), data_map(b.state)) < 1e-12);
            CHECK(fidelity(b.platform, platform_oracle(l)) > 1 - 1e-12);
        }
    }

    TEST_CASE("subgroup superposition prepares the H_l orbit") {
        auto s = subgroup_superposition(list_state({1, 2, 2, 3}));
        const auto f = factor_out(s, {reg::data});
        CHECK(fidelity(f.rest, platform_oracle({1, 2, 2, 3})) > 1 - 1e-12);
        CHECK(f.rest.size() == 2);
        CHECK(subgroup_superposition(list_state({1, 1, 2, 2})).size() == 4);
        const auto plain = factor_out(subgroup_superposition(list_state({1, 2, 3})), {reg::data}).rest;
        CHECK(plain.size() == 1);
        CHECK(std::abs(plain.amplitude_of({{1, 2, 3}})) == doctest::Approx(1.0));
        const auto back = subgroup_superposition_inverse(s);
        CHECK(back.kept_fraction == doctest::Approx(1.0));
        CHECK(back.state.layout().register_count() == 1);
    }

    TEST_CASE("superposed NSIL example") {
        const Amplitude a = 1.0 / std::sqrt(3.0), b = std::sqrt(2.0 / 3.0);
        const auto in = list_superposition({{{1, 2, 2, 3}, a}, {{1, 3, 3, 3}, b}});
        const auto r = nsil_symmetrize_superposed(in);
        CHECK(r.clean_mass > 1 - 1e-12);
        CHECK(oracle::distance(data_map(r.state), oracle::symmetrize({{{1, 2, 2, 3}, a}, {{1, 3, 3, 3}, b}})) <
              1e-12);
        CHECK(r.depth.comparator_layers > 0);
    }

    TEST_CASE("superposed path agrees with the single and SIL paths") {
        const auto single = nsil_symmetrize_single({0, 2, 2, 5});
        const auto sup = nsil_symmetrize_superposed(list_state({0, 2, 2, 5}, 6));
        CHECK(fidelity(single.state, sup.state) > 1 - 1e-12);
        const auto sils = list_superposition({{{1, 2, 3}, 0.8}, {{2, 3, 5}, 0.6}});
        CHECK(oracle::distance(data_map(nsil_symmetrize_superposed(sils).state),
                               data_map(exact_sil_symmetrize(sils))) < 1e-12);
    }

    TEST_CASE("unsymmetrize inverts superposed symmetrization") {
        std::mt19937_64 rng(3);
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<std::pair<IntList, Amplitude>> terms;
            for (int k = 0; k < 3; ++k) terms.push_back({oracle::random_nsil(rng, 4, 3), oracle::random_amp(rng)});
            const auto in = list_superposition(terms, 4).normalized();
            const auto sym = nsil_symmetrize_superposed(in);
            const auto back = nsil_unsymmetrize_superposed(sym.state);
            CHECK(back.clean_mass > 1 - 1e-9);
            CHECK(fidelity(back.state, in) > 1 - 1e-12);
        }
        CHECK_THROWS_AS(nsil_unsymmetrize_superposed(list_state({1, 2}, 3)), ValidationError);
    }

    TEST_CASE("Dicke states") {
        const auto d21 = dicke(2, 1);
        CHECK(d21.size() == 2);
        CHECK(std::abs(d21.amplitude_of({{0, 1}}) - M_SQRT1_2) < 1e-12);
        const auto d42 = dicke(4, 2);
        CHECK(d42.size() == 6);
        for (std::size_t t = 0; t < d42.size(); ++t) CHECK(std::abs(d42.amplitude(t) - 1 / std::sqrt(6.0)) < 1e-12);
        const auto mix = dicke_superposition(4, {{1, M_SQRT1_2}, {3, M_SQRT1_2}});
        const oracle::Vec expect =
            oracle::symmetrize({{{0, 0, 0, 1}, M_SQRT1_2}, {{0, 1, 1, 1}, M_SQRT1_2}});
        CHECK(oracle::overlap(data_map(mix), expect) > 1 - 1e-12);
        CHECK_THROWS_AS(dicke(3, 4), ValidationError);
        CHECK_THROWS_AS(dicke_superposition(4, {{1, 0.5}}), ValidationError);
    }

    TEST_CASE("reference symmetrization matches the oracle") {
        const auto in = list_superposition({{{1, 1, 2}, 0.6}, {{0, 2, 2}, Amplitude(0, 0.8)}});
        CHECK(oracle::distance(data_map(reference_symmetrization(in)),
                               oracle::symmetrize({{{1, 1, 2}, 0.6}, {{0, 2, 2}, Amplitude(0, 0.8)}})) < 1e-12);
    }

    TEST_CASE("LES register conversions invert each other") {
        Layout l({{reg::perm, 4, 5}});
        TermAccumulator acc(l);
        for (const auto& s : les_family(IntList{1, 2, 2, 2})) acc.add(s, 1.0);
        const auto s = acc.sum().normalized();
        for (auto kernel : {LesKernel::parallel, LesKernel::naive}) {
            SymmetrizeOptions o;
            o.les_kernel = kernel;
            const auto p = les_register_to_perm(s, reg::perm, o);
            CHECK(oracle::distance(oracle::to_map(perm_register_to_les(p, reg::perm)), oracle::to_map(s)) < 1e-15);
        }
    }

    TEST_CASE("no invariant violations during normal runs") {
        diagnostics::reset();
        nsil_symmetrize_single({1, 2, 2, 4});
        nsil_symmetrize_superposed(list_superposition({{{1, 1}, 0.6}, {{1, 2}, 0.8}}));
        const auto c = diagnostics::snapshot();
        CHECK(c.violations == 0);
        CHECK(c.ancilla_checks > 0);
        CHECK(c.norm_checks > 0);
    }
}

TEST_SUITE("berry") {
    TEST_CASE("postselected two-element example") {
        BerryConfig cfg;
        cfg.f_n = 100;
        cfg.postselect = true;
        const auto r = berry_sil_symmetrize(list_state({1, 2}), cfg);
        CHECK(r.success_probability == doctest::Approx(0.99).epsilon(1e-12));
        CHECK(r.repetitive_probability == doctest::Approx(0.01).epsilon(1e-12));
        CHECK(oracle::distance(oracle::to_map(r.state), oracle::symmetrize({1, 2})) < 1e-12);
    }

    TEST_CASE("n = 1 is unchanged") {
        BerryConfig cfg;
        cfg.postselect = true;
        cfg.f_n = 4;
        const auto r = berry_sil_symmetrize(list_state({3}), cfg);
        CHECK(r.repetitive_probability == 0.0);
        CHECK(std::abs(r.state.amplitude_of({{3}}) - 1.0) < 1e-12);
    }

    TEST_CASE("without postselection the fidelity respects the bound") {
        BerryConfig cfg;
        cfg.f_n = 512;
        const IntList l{2, 5, 9};
        const auto r = berry_sil_symmetrize(list_state(l), cfg);
        const double p_rep = oracle::repetition_probability(3, 512);
        CHECK(r.repetitive_probability == doctest::Approx(p_rep).epsilon(1e-12));
        const auto ref = reference_symmetrization(list_state(l));
        const double f = reduced_fidelity(r.state, {reg::data}, ref);
        CHECK(f >= 1 - 9.0 / 512);
        CHECK(f >= r.fidelity_bound);
    }

    TEST_CASE("compressed and raw padding registers agree") {
        for (bool post : {true, false}) {
            BerryConfig a;
            a.f_n = 9;
            a.postselect = post;
            BerryConfig b = a;
            b.compress = false;
            const auto ra = berry_sil_symmetrize(list_state({1, 4, 6}), a);
            const auto rb = berry_sil_symmetrize(list_state({1, 4, 6}), b);
            CHECK(ra.repetitive_probability == doctest::Approx(rb.repetitive_probability));
            CHECK(ra.repetitive_probability == doctest::Approx(oracle::repetition_probability(3, 9)));
            const auto ref = reference_symmetrization(list_state({1, 4, 6}));
            if (post) {
                CHECK(fidelity(ra.state, ref) > 1 - 1e-12);
                CHECK(fidelity(rb.state, ref) > 1 - 1e-12);
            } else {
                CHECK(reduced_fidelity(ra.state, {reg::data}, ref) ==
                      doctest::Approx(reduced_fidelity(rb.state, {reg::data}, ref)));
            }
        }
    }

    TEST_CASE("seeded measurement is reproducible") {
        BerryConfig cfg;
        cfg.f_n = 16;
        cfg.seed = 5;
        const auto a = berry_sil_symmetrize(list_state({1, 2, 3}), cfg);
        const auto b = berry_sil_symmetrize(list_state({1, 2, 3}), cfg);
        REQUIRE(a.measured);
        CHECK(*a.measured == *b.measured);
        CHECK(a.state.norm_squared() == doctest::Approx(1.0));
    }

    TEST_CASE("range and preconditions") {
        BerryConfig cfg;
        CHECK(cfg.range(3) == 27);
        cfg.a = 2.5;
        CHECK(cfg.range(4) == 32);
        cfg.f_n = 3;
        CHECK_THROWS_AS(berry_sil_symmetrize(list_state({1, 2}), cfg), ValidationError);
        cfg.f_n = 100;
        CHECK_THROWS_AS(berry_sil_symmetrize(list_state({1, 1}), cfg), ValidationError);
    }

    TEST_CASE("Berry resource drives the single-input path") {
        SymmetrizeOptions o;
        o.resource = ResourceKind::berry;
        o.berry.f_n = 64;
        const auto r = nsil_symmetrize_single({1, 2, 2}, o);
        CHECK(r.resource_success < 1.0);
        CHECK(oracle::distance(data_map(r.state), oracle::symmetrize({1, 2, 2})) < 1e-12);
    }
}

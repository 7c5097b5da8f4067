#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qsym/convert.hpp"

using namespace qsym;

TEST_SUITE("convert") {
    TEST_CASE("occupations to sorted mode list") {
        ConversionTrace trace;
        DepthReport d;
        CHECK(occ_to_nsil({1, 2, 1}, &d, &trace) == IntList{0, 1, 1, 2});
        CHECK(d.comparator_layers > 0);
        REQUIRE(!trace.stages.empty());
        CHECK(trace.stages.front().name == "W1");
        CHECK(trace.stages.back().name == "Wf");
        CHECK(occ_to_nsil({4, 0, 0}) == IntList{0, 0, 0, 0});
        CHECK(occ_to_nsil({0, 0, 3}) == IntList{2, 2, 2});
        CHECK_THROWS_AS(occ_to_nsil({0, 0}), ValidationError);
        CHECK_THROWS_AS(occ_to_nsil({1, -1, 2}), ValidationError);
    }

    TEST_CASE("inverse direction") {
        ConversionTrace trace;
        CHECK(nsil_to_occ({0, 1, 1, 2}, 3, nullptr, &trace) == IntList{1, 2, 1});
        CHECK(trace.stages.front().name == "Wf");
        CHECK(nsil_to_occ({3}, 5) == IntList{0, 0, 0, 1, 0});
        CHECK_THROWS_AS(nsil_to_occ({0, 3}, 3), ValidationError);
        CHECK_THROWS_AS(nsil_to_occ({2, 1}, 3), ValidationError);
    }

    TEST_CASE("exhaustive small cases match the expansion oracle") {
        for (std::size_t m = 1; m <= 4; ++m) {
            for (std::size_t n = 1; n <= 4; ++n) {
                for (const auto& occ : oracle::all_occupations(n, m)) {
                    const IntList l = occ_to_nsil(occ);
                    REQUIRE(l == oracle::expand_occupations(occ));
                    REQUIRE(nsil_to_occ(l, m) == occ);
                }
            }
        }
    }

    TEST_CASE("both networks give the same answer") {
        std::mt19937_64 rng(6);
        for (int rep = 0; rep < 30; ++rep) {
            const std::size_t m = 1 + rng() % 6;
            IntList occ(m);
            for (auto& v : occ) v = static_cast<Value>(rng() % 3);
            occ[0] += 1;
            CHECK(occ_to_nsil(occ, nullptr, nullptr, NetworkKind::bubble) == oracle::expand_occupations(occ));
        }
    }

    TEST_CASE("state conversions") {
        const auto a = second_to_first(occupation_state({{{0, 2}, 1.0}}));
        CHECK(a.size() == 1);
        CHECK(std::abs(a.amplitude_of({{1, 1}})) == doctest::Approx(1.0));

        const auto b = second_to_first(occupation_state({{{1, 1}, 1.0}}));
        CHECK(oracle::distance(oracle::to_map(b), oracle::symmetrize({0, 1})) < 1e-12);

        const Amplitude x = 0.6, y = Amplitude(0, 0.8);
        const auto c = second_to_first(occupation_state({{{2, 0, 0}, x}, {{1, 0, 1}, y}}));
        CHECK(oracle::distance(oracle::to_map(c), oracle::symmetrize({{{0, 0}, x}, {{0, 2}, y}})) < 1e-12);

        const auto back = first_to_second(b, 2);
        CHECK(std::abs(back.amplitude_of({{1, 1}})) == doctest::Approx(1.0));
        const auto eleven = first_to_second(a, 2);
        CHECK(std::abs(eleven.amplitude_of({{0, 2}})) == doctest::Approx(1.0));
        CHECK_THROWS_AS(occupation_state({{{1, 1}, 1.0}, {{1, 0}, 1.0}}), ValidationError);
    }

    TEST_CASE("non-symmetric input is rejected") {
        const auto s = SparseState::basis(Layout({{reg::data, 2, 2}}), {{0, 1}});
        CHECK_THROWS_AS(first_to_second(s, 2), ValidationError);
    }

    TEST_CASE("random occupation superpositions round trip") {
        std::mt19937_64 rng(10);
        for (int rep = 0; rep < 12; ++rep) {
            const std::size_t m = 2 + rng() % 3, n = 1 + rng() % 4;
            const auto all = oracle::all_occupations(n, m);
            std::vector<std::pair<IntList, Amplitude>> terms;
            for (int k = 0; k < 3; ++k) terms.push_back({all[rng() % all.size()], oracle::random_amp(rng)});
            const auto in = occupation_state(terms).normalized();
            const auto first = second_to_first(in);
            const auto back = first_to_second(first, m);
            CHECK(fidelity(back, in) > 1 - 1e-9);
        }
    }
}

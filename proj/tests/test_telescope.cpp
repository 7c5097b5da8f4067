#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qsym/convert.hpp"
#include "qsym/telescope.hpp"

using namespace qsym;

namespace {

// Occupation state as a map keyed by the occupation vector.
oracle::Vec occ_map(const SparseState& s) { return oracle::to_map(s); }

} // namespace

TEST_SUITE("telescope") {
    TEST_CASE("single photon amplitudes") {
        ArrayConfig cfg{4, 1.0, 1.0, 0};
        const auto flat = build_single_photon_state(cfg, PhotonAngles::from_thetas({0.0}));
        REQUIRE(flat.size() == 4);
        for (std::size_t t = 0; t < 4; ++t) CHECK(std::abs(flat.amplitude(t) - 0.5) < 1e-12);

        const auto k2 = build_single_photon_state(cfg, PhotonAngles::from_bins({2}));
        const IntList signs{1, -1, 1, -1};
        for (std::size_t j = 0; j < 4; ++j) {
            IntList occ(4, 0);
            occ[j] = 1;
            CHECK(std::abs(k2.amplitude_of({occ}) - 0.5 * double(signs[j])) < 1e-12);
        }
    }

    TEST_CASE("random angles give normalized states that match the oracle") {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-1.2, 1.2);
        for (int rep = 0; rep < 20; ++rep) {
            ArrayConfig cfg{std::size_t{2} << (rng() % 3), 0.5 + u(rng) * 0.1, 1.0, 0};
            const std::size_t n = 1 + rng() % 3;
            std::vector<double> th(n), sines(n);
            for (std::size_t i = 0; i < n; ++i) sines[i] = std::sin(th[i] = u(rng));
            const auto s = build_multiphoton_state(cfg, PhotonAngles::from_thetas(th));
            CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(oracle::distance(occ_map(s), oracle::multiphoton(cfg.m, cfg.d, cfg.lambda, sines)) < 1e-10);
        }
    }

    TEST_CASE("two photons on two detectors at normal incidence") {
        ArrayConfig cfg{2, 1.0, 1.0, 0};
        const auto s = build_multiphoton_state(cfg, PhotonAngles::from_thetas({0.0, 0.0}));
        const double z = std::sqrt(2.0 + 4.0 + 2.0);
        CHECK(std::abs(s.amplitude_of({{2, 0}}) - std::sqrt(2.0) / z) < 1e-12);
        CHECK(std::abs(s.amplitude_of({{1, 1}}) - 2.0 / z) < 1e-12);
        CHECK(std::abs(s.amplitude_of({{0, 2}}) - std::sqrt(2.0) / z) < 1e-12);
    }

    TEST_CASE("identical grid photons bunch like the oracle") {
        ArrayConfig cfg{4, 1.0, 1.0, 0};
        const auto s = build_multiphoton_state(cfg, PhotonAngles::from_bins({1, 1}));
        const double sn = angle_from_k(cfg, 1);
        CHECK(oracle::distance(occ_map(s), oracle::multiphoton(4, 1.0, 1.0, {sn, sn})) < 1e-12);
        CHECK(build_multiphoton_state(cfg, PhotonAngles::from_bins({})).size() == 1);
    }

    TEST_CASE("QFT identities") {
        Layout l({{"x", 1, 8}});
        std::vector<std::pair<BasisConfig, Amplitude>> ramp, uni;
        for (Value j = 0; j < 8; ++j) {
            ramp.push_back({{{j}}, std::polar(1 / std::sqrt(8.0), 2 * std::numbers::pi * double(j * 3) / 8)});
            uni.push_back({{{j}}, 1 / std::sqrt(8.0)});
        }
        const auto r = qft_register(SparseState::from_terms(l, ramp), "x", 0);
        CHECK(r.size() == 1);
        CHECK(std::abs(r.amplitude_of({{3}})) == doctest::Approx(1.0));
        CHECK(std::abs(qft_register(SparseState::from_terms(l, uni), "x", 0).amplitude_of({{0}})) ==
              doctest::Approx(1.0));
        CHECK_THROWS_AS(qft_register(SparseState::basis(Layout({{"y", 1, 6}}), {{1}}), "y", 0), ValidationError);
    }

    TEST_CASE("QFT matches the dense transform and inverts") {
        std::mt19937_64 rng(4);
        Layout l({{"x", 2, 4}});
        TermAccumulator acc(l);
        for (int i = 0; i < 6; ++i) acc.add(IntList{Value(rng() % 4), Value(rng() % 4)}, oracle::random_amp(rng));
        const auto s = acc.sum().normalized();
        const auto f = qft_all(s, "x");
        CHECK(oracle::distance(oracle::to_map(f), oracle::dft_all(oracle::to_map(s), 4, 2)) < 1e-12);
        CHECK(oracle::distance(oracle::to_map(qft_all(f, "x", true)), oracle::to_map(s)) < 1e-12);
    }

    TEST_CASE("grid angle round trip") {
        for (Value v : {0, 1}) {
            ArrayConfig cfg{8, 2.0, 1.0, v};
            for (Value k = 0; k < 8; ++k) CHECK(k_from_sin(cfg, angle_from_k(cfg, k)) == k);
        }
        ArrayConfig cfg{4, 1.0, 1.0, 0};
        CHECK(angle_from_k(cfg, 0) == 0.0);
        CHECK(angle_from_k(cfg, 2) == doctest::Approx(0.5));
        CHECK_THROWS_AS(angle_from_k(cfg, 4), ValidationError);
        CHECK_THROWS_AS((ArrayConfig{1, 1, 1, 0}.validate()), ValidationError);
    }

    TEST_CASE("imaging pipeline on the grid") {
        ArrayConfig cfg{4, 1.0, 1.0, 0};
        auto r = image_pipeline(cfg, PhotonAngles::from_bins({2}), 1);
        CHECK(r.multisets.at({2}) == doctest::Approx(1.0));
        CHECK(r.recovered == IntList{2});

        r = image_pipeline(cfg, PhotonAngles::from_bins({1, 3}), 1);
        CHECK(r.multisets.at({1, 3}) == doctest::Approx(1.0));
        CHECK(r.ordered.at({1, 3}) == doctest::Approx(0.5));
        CHECK(r.ordered.at({3, 1}) == doctest::Approx(0.5));
        CHECK(r.sample == IntList{1, 3});

        r = image_pipeline(cfg, PhotonAngles::from_bins({}), 1);
        CHECK(r.multisets.at({}) == 1.0);
        CHECK(r.recovered.empty());
        CHECK_THROWS_AS(image_pipeline(ArrayConfig{6, 1, 1, 0}, PhotonAngles::from_bins({1}), 1), ValidationError);
    }

    TEST_CASE("readout distribution matches the dense oracle off the grid") {
        ArrayConfig cfg{4, 1.0, 1.0, 0};
        const std::vector<double> th{0.3, -0.2};
        const auto r = image_pipeline(cfg, PhotonAngles::from_thetas(th), 3);
        // Symmetric first-quantized state from the oracle occupation state.
        const auto occ = oracle::multiphoton(4, 1.0, 1.0, {std::sin(th[0]), std::sin(th[1])});
        oracle::Vec first;
        for (const auto& [w, a] : occ) {
            const auto part = oracle::symmetrize(oracle::expand_occupations(w));
            for (const auto& [k, b] : part) first[k] += a * b;
        }
        const auto dense = oracle::dft_all(first, 4, 2);
        for (const auto& [k, a] : dense) CHECK(r.ordered.at(k) == doctest::Approx(std::norm(a)).epsilon(1e-10));
        CHECK(oracle::overlap(oracle::to_map(r.symmetric), first) > 1 - 1e-12);
    }
}

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "qsym/cli.hpp"
#include "qsym/json_io.hpp"
#include "qsym/network.hpp"
#include "qsym/symmetrize.hpp"

using namespace qsym;

namespace {

struct Run {
    int code;
    std::string out, err;
    json doc() const { return json::parse(out); }
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("qsym_test_" + name)).string();
}

} // namespace

TEST_SUITE("json") {
    TEST_CASE("state round trip is byte stable") {
        const auto s = list_superposition({{{1, 2, 2}, Amplitude(0.6, 0.1)}, {{0, 1, 3}, Amplitude(0, -0.79)}});
        const json j = state_to_json(s);
        const auto back = state_from_json(j);
        CHECK(oracle::distance(oracle::to_map(back), oracle::to_map(s)) == 0.0);
        CHECK(state_to_json(back).dump() == j.dump());
    }

    TEST_CASE("malformed input") {
        CHECK_THROWS_AS(state_from_json(json::parse(R"({"terms": []})")), ValidationError);
        CHECK_THROWS_AS(state_from_json(json::parse(R"({"layout":[{"name":"data","arity":2,"bound":3}],
            "terms":[{"basis":[[1,5]],"re":1}]})")),
                        ValidationError);
    }

    TEST_CASE("list parsing") {
        CHECK(parse_list("122") == IntList{1, 2, 2});
        CHECK(parse_list("1,2,10") == IntList{1, 2, 10});
        CHECK(parse_list("3 4") == IntList{3, 4});
        CHECK_THROWS_AS(parse_list("1,x"), ValidationError);
        CHECK_THROWS_AS(parse_list("12a"), ValidationError);
    }

    TEST_CASE("network and depth documents") {
        const json n = network_to_json(build_bubble(3));
        CHECK(n["comparators"] == 3);
        CHECK(depth_to_json(DepthReport{1, 2, 3})["ancilla_qubits"] == 3);
    }
}

TEST_SUITE("cli") {
    TEST_CASE("symmetrize a list") {
        auto r = cli({"--quiet", "symmetrize", "122", "--mode", "single"});
        REQUIRE(r.code == 0);
        const json d = r.doc();
        CHECK(d["terms"] == 3);
        CHECK(d["fidelity"].get<double>() == doctest::Approx(1.0));
        CHECK(r.err.empty());

        r = cli({"-q", "symmetrize", "1", "--mode", "single"});
        CHECK(r.code == 0);
        CHECK(r.doc()["terms"] == 1);

        r = cli({"-q", "symmetrize", "1,3,7", "--mode", "sil-berry", "--f", "64", "--postselect"});
        CHECK(r.code == 0);
        CHECK(r.doc()["fidelity"].get<double>() == doctest::Approx(1.0));
    }

    TEST_CASE("symmetrize a state file in superposed mode") {
        const auto in = list_superposition({{{1, 2, 2, 3}, 1 / std::sqrt(3.0)}, {{1, 3, 3, 3}, std::sqrt(2.0 / 3.0)}});
        const std::string path = temp_path("state.json");
        write_text_file(path, state_to_json(in).dump());
        const auto r = cli({"-q", "symmetrize", path, "--mode", "superposed"});
        REQUIRE(r.code == 0);
        CHECK(r.doc()["fidelity"].get<double>() == doctest::Approx(1.0));
        CHECK(r.doc()["terms"] == 16);
        std::filesystem::remove(path);
    }

    TEST_CASE("dicke, convert, les, telescope") {
        CHECK(cli({"-q", "dicke", "2", "1"}).doc()["terms"] == 2);
        CHECK(cli({"-q", "dicke", "4", "2"}).doc()["terms"] == 6);
        const auto w = cli({"-q", "dicke", "6", "--weights", "1:1,3:1,5:2"});
        REQUIRE(w.code == 0);
        CHECK(w.doc()["fidelity"].get<double>() == doctest::Approx(1.0));

        CHECK(cli({"-q", "convert", "1,2,1"}).doc()["nsil"] == json({0, 1, 1, 2}));
        CHECK(cli({"-q", "convert", "0,1,1,2", "--inverse", "--modes", "3"}).doc()["occupations"] == json({1, 2, 1}));
        const auto st = cli({"-q", "convert", "1,1", "--state", "--stages"}).doc();
        CHECK(st["fidelity"].get<double>() == doctest::Approx(1.0));
        CHECK(st["stages"].size() > 5);

        CHECK(cli({"-q", "les", "121153"}).doc()["permutation"] == json({4, 3, 6, 1, 2, 5}));
        CHECK(cli({"-q", "les", "436125", "--inverse"}).doc()["les"] == json({1, 2, 1, 1, 5, 3}));

        const auto t = cli({"-q", "telescope", "--grid", "2", "--detectors", "4"}).doc();
        REQUIRE(t["multisets"].size() == 1);
        CHECK(t["multisets"][0]["outcome"] == json({2}));
        CHECK(t["multisets"][0]["probability"].get<double>() == doctest::Approx(1.0));
    }

    TEST_CASE("manifest, output file and seeds") {
        const std::string out = temp_path("out.json"), man = temp_path("manifest.json"), csv = temp_path("p.csv");
        auto r = cli({"--output", out, "--manifest", man, "--seed", "7", "telescope", "--photons", "0.1,0.4",
                      "--csv", csv});
        REQUIRE(r.code == 0);
        CHECK(r.out.empty());
        const json m = json::parse(r.err);
        CHECK(m["seed"] == 7);
        CHECK(m["command"] == "telescope");
        CHECK(m["parameters"]["--photons"] == "0.1,0.4");
        CHECK(json::parse(read_text_file(man))["outputs"].size() == 2);
        CHECK(read_text_file(csv).rfind("outcome,probability", 0) == 0);
        const auto first = json::parse(read_text_file(out))["sample"];
        cli({"-q", "--output", out, "--seed", "7", "telescope", "--photons", "0.1,0.4"});
        CHECK(json::parse(read_text_file(out))["sample"] == first);

        ::setenv("QSYM_SEED", "19", 1);
        r = cli({"les", "121"});
        CHECK(json::parse(r.err)["seed"] == 19);
        ::setenv("QSYM_SEED", "x", 1);
        CHECK(cli({"les", "121"}).code == kExitValidation);
        ::unsetenv("QSYM_SEED");
        for (const auto& p : {out, man, csv}) std::filesystem::remove(p);
    }

    TEST_CASE("errors map to exit codes with one line") {
        auto r = cli({"les", "436125"});
        CHECK(r.code == kExitValidation);
        CHECK(r.err.rfind("error: ", 0) == 0);
        CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
        CHECK(cli({"symmetrize", "21", "--mode", "single"}).code == kExitValidation);
        CHECK(cli({"symmetrize", "122", "--mode", "sil-exact"}).code == kExitValidation);
        CHECK(cli({"frobnicate"}).code == kExitValidation);
        CHECK(cli({}).code == kExitValidation);
        CHECK(cli({"dicke", "3"}).code == kExitValidation);
        CHECK(cli({"telescope", "--detectors", "6", "--grid", "1"}).code == kExitValidation);
        CHECK(cli({"symmetrize", "122", "--network", "aks"}).code == kExitValidation);
        r = cli({"--help"});
        CHECK(r.code == kExitOk);
        CHECK(r.out.find("symmetrize") != std::string::npos);
    }
}

#include <doctest.h>

#include <map>
#include <random>

#include "rankbench/error.hpp"
#include "rankbench/model.hpp"
#include "support/fixtures.hpp"

using namespace rankbench;
using namespace rankbench::testing;

namespace {

const char* kSmallCsv =
    "solver,instance,seed,status,cpu_time,quality\n"
    "A,i1,0,solved,12.5,\n"
    "A,i2,0,timeout,300,\n"
    "A,i3,0,crashed,0.1,\n"
    "B,i1,0,solved_optimal,3,42\n"
    "B,i2,0,unsolved,300,\n"
    "B,i3,0,incorrect,7,\n";

}  // namespace

TEST_SUITE("model") {

TEST_CASE("csv with every (solver, run) pair loads") {
    const auto d = parse_dataset(kSmallCsv, InputFormat::csv);
    CHECK(d.solvers == std::vector<std::string>{"A", "B"});
    REQUIRE(d.run_count() == 3);
    CHECK(d.runs[1] == RunKey{"i2", 0});
    CHECK(d.record(1, 0).status == RunStatus::solved_optimal);
    CHECK(d.record(1, 0).quality == 42.0);
    CHECK_FALSE(d.record(0, 0).quality.has_value());
    CHECK(d.strata.at("i3") == "default");
    CHECK(validate_dataset(d).empty());
}

TEST_CASE("missing result row names the missing pair") {
    std::string text = kSmallCsv;
    text.erase(text.find("B,i2"), std::string("B,i2,0,unsolved,300,\n").size());
    try {
        parse_dataset(text, InputFormat::csv);
        FAIL("expected a completeness error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("(B, i2@0)") != std::string::npos);
    }
}

TEST_CASE("duplicate result row is rejected") {
    std::string text = std::string(kSmallCsv) + "A,i1,0,solved,1,\n";
    CHECK_THROWS_AS(parse_dataset(text, InputFormat::csv), DataError);
}

TEST_CASE("malformed rows are parse errors") {
    const std::string header = "solver,instance,seed,status,cpu_time,quality\n";
    CHECK_THROWS_AS(parse_dataset("solver,instance,seed\nA,i1,0\n", InputFormat::csv), ParseError);
    CHECK_THROWS_AS(parse_dataset(header + "A,i1,x,solved,1,\n", InputFormat::csv), ParseError);
    CHECK_THROWS_AS(parse_dataset(header + "A,i1,0,won,1,\n", InputFormat::csv), ParseError);
    CHECK_THROWS_AS(parse_dataset(header + "A,i1,0,solved,fast,\n", InputFormat::csv), ParseError);
    CHECK_THROWS_AS(parse_dataset(header + "A,i1,0,solved,1\n", InputFormat::csv), ParseError);
    CHECK_THROWS_AS(parse_dataset(header + "A,i1,-1,solved,1,\n", InputFormat::csv), ParseError);
}

TEST_CASE("quoted identifiers survive") {
    const std::string text =
        "solver,instance,seed,status,cpu_time,quality\r\n"
        "\"Riss6, noPP\",\"inst \"\"x\"\"\",3,solved,1,\r\n"
        "B,\"inst \"\"x\"\"\",3,timeout,300,\r\n";
    const auto d = parse_dataset(text, InputFormat::csv);
    CHECK(d.solvers[0] == "Riss6, noPP");
    CHECK(d.runs[0].instance_id == "inst \"x\"");
    CHECK(d.runs[0].seed == 3);
}

TEST_CASE("config supplies cutoff, strata and reference data") {
    const std::string config = R"({
        "cutoff_seconds": 300,
        "strata": {"i1": "barman", "i2": "barman", "i3": "tetris"},
        "reference": {"i1@0": {"best_known_quality": 10, "reference_time": 2.5}}
    })";
    const auto d = parse_dataset(kSmallCsv, InputFormat::csv, std::string_view(config));
    CHECK(d.cutoff == 300.0);
    CHECK(d.partition_by_stratum().size() == 2);
    const auto* ref = d.reference_for(0);
    REQUIRE(ref != nullptr);
    CHECK(ref->best_known_quality == 10.0);
    CHECK(ref->reference_time == 2.5);
    CHECK(d.reference_for(1) == nullptr);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_dataset(kSmallCsv, InputFormat::csv, std::string_view("{")), ParseError);
    CHECK_THROWS_AS(parse_dataset(kSmallCsv, InputFormat::csv, std::string_view(R"({"reference": {"i1": {}}})")),
                    ParseError);
    // stratum missing for i3
    CHECK_THROWS_AS(
        parse_dataset(kSmallCsv, InputFormat::csv, std::string_view(R"({"strata": {"i1": "a", "i2": "b"}})")),
        DataError);
    CHECK_THROWS_AS(parse_dataset(kSmallCsv, InputFormat::csv, std::string_view(R"({"cutoff_seconds": 0})")),
                    DataError);
}

TEST_CASE("validate_dataset names offending entities") {
    auto d = parse_dataset(kSmallCsv, InputFormat::csv);
    CHECK(validate_dataset(d).empty());

    SUBCASE("negative cpu time") {
        d.results[1].cpu_time = -1.0;
        const auto v = validate_dataset(d);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("(A, i2@0)") != std::string::npos);
    }
    SUBCASE("instance without stratum") {
        d.strata.erase("i2");
        const auto v = validate_dataset(d);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("'i2'") != std::string::npos);
    }
    SUBCASE("quality better than the best known") {
        d.reference[{"i1", 0}] = {50.0, std::nullopt};
        const auto v = validate_dataset(d);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("(B, i1@0)") != std::string::npos);
    }
    SUBCASE("structural problems") {
        d.solvers.pop_back();
        d.results.resize(3);
        CHECK(validate_dataset(d).size() == 1);
        d.results.pop_back();
        CHECK(validate_dataset(d).size() == 2);
    }
}

TEST_CASE("14 strata of 20 instances survive a round trip") {
    const auto d = make_dataset(15, 280, [](std::size_t s, std::size_t r) { return (s + r) % 3 ? solved() : failed(); },
                                [](std::size_t r) { return "domain" + std::to_string(r / 20); });
    const auto reloaded = parse_dataset(write_results(d, InputFormat::csv), InputFormat::csv,
                                        std::string_view(write_config(d)));
    CHECK(reloaded.solver_count() == 15);
    std::map<std::string, std::size_t> histogram;
    for (const auto& st : reloaded.partition_by_stratum()) histogram[st.label] = st.runs.size();
    CHECK(histogram.size() == 14);
    for (const auto& [label, count] : histogram) CHECK(count == 20);
}

TEST_CASE("csv and json round trips are lossless") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        auto d = random_dataset(rng, 2 + trial % 5, 1 + trial * 3, 1 + trial % 4);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (auto& rec : d.results) {
            rec.cpu_time = unit(rng) * 1e3;  // arbitrary binary fractions
            if (unit(rng) < 0.5) rec.quality = unit(rng) * 17.0 + 1.0;
        }
        d.runs[0].seed = 18446744073709551615ULL;
        d.strata = {};
        for (const auto& inst : d.instances()) d.strata[inst] = "s" + std::to_string(inst.size() % 3);
        d.reference[d.runs[0]] = {0.5, 3.0};
        REQUIRE(validate_dataset(d).empty());

        for (auto format : {InputFormat::csv, InputFormat::json}) {
            const auto back = parse_dataset(write_results(d, format), format, std::string_view(write_config(d)));
            CHECK(back == d);
        }
    }
}

TEST_CASE("format inference") {
    CHECK(infer_format("runs.json") == InputFormat::json);
    CHECK(infer_format("runs.JSON") == InputFormat::json);
    CHECK(infer_format("runs.csv") == InputFormat::csv);
    CHECK(infer_format("runs") == InputFormat::csv);
}

}  // TEST_SUITE

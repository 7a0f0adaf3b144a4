#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "rankbench/error.hpp"
#include "rankbench/sensitivity.hpp"
#include "support/fixtures.hpp"

using namespace rankbench;
using namespace rankbench::testing;

namespace {

OfficialRanking listing(std::vector<std::size_t> order) {
    OfficialRanking o;
    o.ranks.resize(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) o.ranks[order[p]] = static_cast<std::int32_t>(p + 1);
    o.order = std::move(order);
    return o;
}

/// Solved-count listing by hand: count, sort by (count desc, id asc).
std::vector<std::string> brute_listing(const std::map<std::string, std::set<std::string>>& solves,
                                       const std::string& removed) {
    std::vector<std::pair<int, std::string>> rows;
    for (const auto& [solver, set] : solves) {
        int count = 0;
        for (const auto& inst : set) count += inst != removed ? 1 : 0;
        rows.push_back({-count, solver});
    }
    std::sort(rows.begin(), rows.end());
    std::vector<std::string> out;
    for (const auto& r : rows) out.push_back(r.second);
    return out;
}

}  // namespace

TEST_SUITE("sensitivity") {

TEST_CASE("compare_rankings") {
    const auto base = listing({0, 1, 2, 3});
    CHECK(compare_rankings(base, base, 3) == RankingChange::unchanged);
    CHECK(compare_rankings(base, base, 4) == RankingChange::unchanged);
    CHECK(compare_rankings(base, listing({1, 0, 2, 3}), 3) == RankingChange::order_changed);
    CHECK(compare_rankings(base, listing({0, 3, 2, 1}), 3) == RankingChange::comp_changed);
    CHECK(compare_rankings(base, listing({0, 1, 3, 2}), 2) == RankingChange::unchanged);
    CHECK(compare_rankings(base, listing({0, 1, 3, 2}), 4) == RankingChange::order_changed);
    CHECK_THROWS_AS(compare_rankings(base, base, 0), UsageError);
    CHECK_THROWS_AS(compare_rankings(base, base, 5), UsageError);
    CHECK(to_string(RankingChange::comp_changed) == "comp_changed");
}

TEST_CASE("constructed three-solver dataset matches enumeration") {
    const std::map<std::string, std::set<std::string>> solves{
        {"A", {"i1", "i2"}}, {"B", {"i1", "i2", "i3"}}, {"C", {}}};
    const std::vector<std::string> instances{"i1", "i2", "i3", "i4"};

    Dataset d;
    d.cutoff = 300.0;
    d.solvers = {"A", "B", "C"};
    for (const auto& inst : instances) {
        d.runs.push_back({inst, 0});
        d.strata[inst] = "default";
    }
    for (const auto& s : d.solvers) {
        for (const auto& inst : instances) d.results.push_back(solves.at(s).contains(inst) ? solved() : failed());
    }
    AnalysisConfig cfg;
    cfg.mechanism = {MechanismKind::solved_count};
    const auto report = leave_one_out_analysis(d, cfg, 2);

    const auto base = brute_listing(solves, "");
    SensitivityCounts expected;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto variant = brute_listing(solves, instances[i]);
        const bool changed = variant != base;
        const bool same_set = std::is_permutation(base.begin(), base.end(), variant.begin());
        expected.any_change += changed;
        expected.top3_order += changed && same_set;
        expected.top10_order += changed && same_set;
        CHECK(report.instances[i].instance == instances[i]);
        CHECK(report.instances[i].any_change == changed);
    }
    CHECK(expected.any_change == 1);
    CHECK(report.counts.any_change == expected.any_change);
    CHECK(report.counts.top3_order == expected.top3_order);
    CHECK(report.counts.top10_order == expected.top10_order);
    CHECK(report.counts.top3_comp == 0);
    CHECK(report.counts.top10_comp == 0);
    CHECK(report.instances[2].any_change);
    CHECK(report.instances[2].any_rank_change);
    CHECK(report.baseline.order == std::vector<std::size_t>{1, 0, 2});

    CHECK(sensitivity_csv(report) ==
          "instance,any_change,top10_comp,top10_order,top3_comp,top3_order\n"
          "i1,0,0,0,0,0\ni2,0,0,0,0,0\ni3,1,0,1,0,1\ni4,0,0,0,0,0\n");
}

TEST_CASE("flags are consistent on random datasets") {
    std::mt19937_64 rng(90);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n_solvers = 2 + trial % 14;
        const std::size_t n_instances = 2 + rng() % 25;
        const auto d = random_dataset(rng, n_solvers, n_instances);
        AnalysisConfig cfg;
        cfg.mechanism = {trial % 2 ? MechanismKind::par_k : MechanismKind::solved_count, 10};
        cfg.tiebreak = {TiebreakKey::total_time};
        const auto report = leave_one_out_analysis(d, cfg, 3);

        REQUIRE(report.instances.size() == n_instances);
        for (const auto& row : report.instances) {
            CHECK_FALSE((row.top10_comp && row.top10_order));
            CHECK_FALSE((row.top3_comp && row.top3_order));
            if (row.top10_comp || row.top10_order || row.top3_comp || row.top3_order) CHECK(row.any_change);
        }
        CHECK(report.counts.any_change <= n_instances);
        CHECK(report.counts.top10_comp + report.counts.top10_order <= report.counts.any_change);
        CHECK(report.counts.top3_comp + report.counts.top3_order <= report.counts.any_change);

        const auto baseline = official_ranking(compute_scores(d, cfg.mechanism, all_runs(d)), d, cfg.tiebreak);
        CHECK(report.baseline.order == baseline.order);
        CHECK(report.baseline.ranks == baseline.ranks);
        CHECK(leave_one_out_analysis(d, cfg, 1).instances == report.instances);
    }
}

TEST_CASE("removing an instance with identical records changes nothing") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 40; ++trial) {
        auto d = random_dataset(rng, 6, 12);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (auto& rec : d.results) rec.quality = 1.0 + unit(rng);
        for (const auto& run : d.runs) d.reference[run] = {1.0, 20.0};
        const RunRecord shared = trial % 2 ? RunRecord{RunStatus::solved, 42.0, 1.5} : RunRecord{RunStatus::timeout, 300.0, 1.5};
        for (std::size_t s = 0; s < d.solver_count(); ++s) d.results[s * d.run_count() + 5] = shared;

        for (auto kind : {MechanismKind::solved_count, MechanismKind::optimal_count, MechanismKind::ipc_quality,
                          MechanismKind::ipc_agile}) {
            AnalysisConfig cfg;
            cfg.mechanism = {kind};
            const auto report = leave_one_out_analysis(d, cfg);
            const auto& row = report.instances[5];
            CHECK_FALSE(row.any_change);
            CHECK_FALSE(row.any_rank_change);
        }
    }
}

TEST_CASE("uniform per-instance contributions give zero counts") {
    const auto d = make_dataset(5, 8, [](std::size_t s, std::size_t) { return s < 3 ? solved(3.0) : failed(); });
    AnalysisConfig cfg;
    cfg.mechanism = {MechanismKind::solved_count};
    const auto report = leave_one_out_analysis(d, cfg);
    CHECK(report.counts == SensitivityCounts{});
}

TEST_CASE("all seeds of an instance are removed together") {
    Dataset d;
    d.cutoff = 300.0;
    d.solvers = {"A", "B"};
    d.runs = {{"x", 0}, {"x", 1}, {"y", 0}};
    d.strata = {{"x", "default"}, {"y", "default"}};
    // A wins both seeds of x, B wins y: removing x flips the order, removing one seed would not
    d.results = {solved(), solved(), failed(), failed(), failed(), solved()};
    AnalysisConfig cfg;
    cfg.mechanism = {MechanismKind::solved_count};
    const auto report = leave_one_out_analysis(d, cfg);
    REQUIRE(report.instances.size() == 2);
    CHECK(report.instances[0].instance == "x");
    CHECK(report.instances[0].top3_order);
    CHECK(report.instances[1].instance == "y");
    CHECK_FALSE(report.instances[1].any_change);
}

TEST_CASE("fewer than two instances is an error") {
    const auto d = make_dataset(2, 1, [](auto, auto) { return solved(); });
    AnalysisConfig cfg;
    CHECK_THROWS_AS(leave_one_out_analysis(d, cfg), DataError);
}

}  // TEST_SUITE

#include <doctest.h>

#include <array>
#include <random>

#include "rankbench/error.hpp"
#include "rankbench/scoring.hpp"
#include "support/fixtures.hpp"

using namespace rankbench;
using namespace rankbench::testing;

namespace {

/// One-solver-pair dataset whose solver 0 gets the given records, solver 1 fails everywhere.
Dataset single_column(const std::vector<RunRecord>& records) {
    return make_dataset(2, records.size(), [&](std::size_t s, std::size_t r) { return s == 0 ? records[r] : failed(); });
}

ScoreVector scores_of(std::initializer_list<double> values) {
    ScoreVector sv;
    sv.scores = values;
    sv.success_time.assign(sv.scores.size(), 0.0);
    return sv;
}

}  // namespace

TEST_SUITE("scoring") {

TEST_CASE("solved_count counts successes only") {
    const auto d = single_column({solved(), failed(RunStatus::timeout), solved(), failed(RunStatus::crashed), solved()});
    const auto sv = compute_scores(d, {MechanismKind::solved_count}, all_runs(d));
    CHECK(sv.scores[0] == 3.0);
    CHECK(sv.scores[1] == 0.0);
}

TEST_CASE("solved_count ignores runs past the cutoff and failure statuses") {
    const auto d = single_column({solved(300.0), solved(300.5), {RunStatus::solved_optimal, 1.0, std::nullopt},
                                  failed(RunStatus::incorrect), failed(RunStatus::unsolved)});
    CHECK(compute_scores(d, {MechanismKind::solved_count}, all_runs(d)).scores[0] == 2.0);
}

TEST_CASE("optimal_count counts solved_optimal only") {
    const auto d = single_column({solved(), {RunStatus::solved_optimal, 5.0, std::nullopt},
                                  {RunStatus::solved_optimal, 1.0, std::nullopt}});
    CHECK(compute_scores(d, {MechanismKind::optimal_count}, all_runs(d)).scores[0] == 2.0);
}

TEST_CASE("par_k averages penalised times, negated") {
    const auto d = single_column({solved(100.0), failed()});
    const auto sv = compute_scores(d, {MechanismKind::par_k, 10}, all_runs(d));
    CHECK(sv.scores[0] == -1550.0);
    CHECK(sv.scores[1] == -3000.0);

    auto unbounded = d;
    unbounded.cutoff = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(compute_scores(unbounded, {MechanismKind::par_k, 10}, all_runs(d)), DataError);
}

TEST_CASE("ipc_quality sums best_known / quality over solved entries") {
    auto d = single_column({{RunStatus::solved, 1.0, 10.0}, {RunStatus::solved, 1.0, 20.0}, failed()});
    for (const auto& run : d.runs) d.reference[run] = {10.0, std::nullopt};
    CHECK(compute_scores(d, {MechanismKind::ipc_quality}, all_runs(d)).scores[0] == 1.5);

    d.reference.erase(d.runs[2]);
    CHECK_THROWS_AS(compute_scores(d, {MechanismKind::ipc_quality}, all_runs(d)), DataError);
    CHECK(compute_scores(d, {MechanismKind::ipc_quality}, RunMultiset{0, 1}).scores[0] == 1.5);
}

TEST_CASE("ipc_agile entry contributions") {
    const Mechanism agile{MechanismKind::ipc_agile};
    const ReferenceData ref{std::nullopt, 20.0};
    CHECK(entry_contribution(agile, solved(20.0), 300.0, &ref) == 1.0);
    CHECK(entry_contribution(agile, solved(2.0), 300.0, &ref) == 1.0);
    CHECK(entry_contribution(agile, solved(200.0), 300.0, &ref) == doctest::Approx(0.5));
    CHECK(entry_contribution(agile, failed(), 300.0, &ref) == 0.0);
    // times below 1 s are floored
    const ReferenceData tiny{std::nullopt, 0.01};
    CHECK(entry_contribution(agile, solved(0.5), 300.0, &tiny) == 1.0);
    CHECK_THROWS_AS(entry_contribution(agile, solved(1.0), 300.0, nullptr), DataError);
}

TEST_CASE("mean_metric averages quality and requires it everywhere") {
    auto d = make_dataset(2, 4, [](std::size_t s, std::size_t r) {
        return RunRecord{RunStatus::solved, 0.0, 0.25 * static_cast<double>(r + s)};
    });
    const auto sv = compute_scores(d, {MechanismKind::mean_metric}, all_runs(d));
    CHECK(sv.scores[0] == doctest::Approx(0.375));
    CHECK(sv.scores[1] == doctest::Approx(0.625));
    d.results[3].quality.reset();
    CHECK_THROWS_AS(compute_scores(d, {MechanismKind::mean_metric}, all_runs(d)), DataError);
}

TEST_CASE("scoring table matches direct scoring bit for bit") {
    std::mt19937_64 rng(11);
    auto d = random_dataset(rng, 6, 40);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& rec : d.results) rec.quality = 1.0 + unit(rng);
    for (const auto& run : d.runs) d.reference[run] = {1.0, 1.0 + 50.0 * unit(rng)};

    for (auto kind : {MechanismKind::solved_count, MechanismKind::optimal_count, MechanismKind::par_k,
                      MechanismKind::ipc_quality, MechanismKind::ipc_agile, MechanismKind::mean_metric}) {
        const Mechanism mech{kind, 10};
        const ScoringTable table(d, mech);
        RunMultiset rs;
        for (int i = 0; i < 57; ++i) rs.push_back(static_cast<std::size_t>(unit(rng) * 40));
        const auto direct = compute_scores(d, mech, rs);
        const auto fast = table.score(rs);
        CHECK(direct.scores == fast.scores);
        CHECK(direct.success_time == fast.success_time);
    }
}

TEST_CASE("all-fail runs and duplication properties") {
    std::mt19937_64 rng(5);
    auto d = random_dataset(rng, 5, 30);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& rec : d.results) rec.quality = 1.0 + unit(rng);
    for (const auto& run : d.runs) d.reference[run] = {1.0, 10.0};
    // make run 7 fail for everybody
    for (std::size_t s = 0; s < d.solver_count(); ++s) {
        d.results[s * d.run_count() + 7] = failed();
        d.results[s * d.run_count() + 7].quality = 1.0;
    }

    RunMultiset without(all_runs(d));
    without.erase(without.begin() + 7);
    const auto with = all_runs(d);
    RunMultiset doubled = with;
    doubled.insert(doubled.end(), with.begin(), with.end());

    for (auto kind : {MechanismKind::solved_count, MechanismKind::optimal_count, MechanismKind::ipc_quality,
                      MechanismKind::ipc_agile}) {
        const Mechanism mech{kind};
        CHECK(compute_scores(d, mech, with).scores == compute_scores(d, mech, without).scores);
        const auto once = compute_scores(d, mech, with).scores;
        const auto twice = compute_scores(d, mech, doubled).scores;
        for (std::size_t s = 0; s < once.size(); ++s) CHECK(twice[s] == doctest::Approx(2.0 * once[s]));
    }
    for (auto kind : {MechanismKind::par_k, MechanismKind::mean_metric}) {
        const Mechanism mech{kind, 10};
        const auto once = compute_scores(d, mech, with).scores;
        const auto twice = compute_scores(d, mech, doubled).scores;
        for (std::size_t s = 0; s < once.size(); ++s) CHECK(twice[s] == doctest::Approx(once[s]));
    }
}

TEST_CASE("official ranking uses min-ranks") {
    const auto d = binary_dataset({{1}, {1}, {1}});  // solver ids s00, s01, s02
    SUBCASE("1224 style") {
        const auto r = official_ranking(scores_of({5, 3, 5}), d, {});
        CHECK(r.ranks == std::vector<std::int32_t>{1, 3, 1});
        CHECK(r.order == std::vector<std::size_t>{0, 2, 1});
    }
    SUBCASE("all equal") {
        const auto r = official_ranking(scores_of({2, 2, 2}), d, {});
        CHECK(r.ranks == std::vector<std::int32_t>{1, 1, 1});
        CHECK(r.order == std::vector<std::size_t>{0, 1, 2});
    }
}

TEST_CASE("tie-break chain orders the listing, never the ranks") {
    const auto d = binary_dataset({{1}, {1}, {1}});
    ScoreVector sv = scores_of({5, 3, 5});
    sv.success_time = {200.0, 0.0, 100.0};
    const std::array chain{TiebreakKey::total_time};
    const auto r = official_ranking(sv, d, chain);
    CHECK(r.order == std::vector<std::size_t>{2, 0, 1});
    CHECK(r.ranks[0] == 1);
    CHECK(r.ranks[2] == 1);
    CHECK(r.ranks[1] == 3);
}

TEST_CASE("positive affine transforms leave the ranking unchanged") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> small(0, 6);
    const auto d = binary_dataset(std::vector<std::vector<int>>(8, std::vector<int>{1}));
    for (int trial = 0; trial < 200; ++trial) {
        ScoreVector sv;
        for (int s = 0; s < 8; ++s) sv.scores.push_back(small(rng));
        sv.success_time.assign(8, 0.0);
        ScoreVector moved = sv;
        for (auto& v : moved.scores) v = 2.5 * v + 17.0;
        const auto a = official_ranking(sv, d, {});
        const auto b = official_ranking(moved, d, {});
        CHECK(a.order == b.order);
        CHECK(a.ranks == b.ranks);
    }
}

TEST_CASE("mechanism and tie-break tokens") {
    CHECK(parse_mechanism("par_k") == MechanismKind::par_k);
    CHECK_FALSE(parse_mechanism("par10").has_value());
    CHECK(to_string(MechanismKind::ipc_agile) == "ipc_agile");
    CHECK(parse_tiebreak("total_time") == TiebreakKey::total_time);
    CHECK_FALSE(parse_tiebreak("time").has_value());
}

}  // TEST_SUITE

#include "rankbench/sensitivity.hpp"

#include <algorithm>
#include <set>

#include "rankbench/error.hpp"
#include "rankbench/parallel.hpp"
#include "text_io.hpp"

namespace rankbench {

std::string_view to_string(RankingChange change) {
    switch (change) {
        case RankingChange::unchanged:
            return "unchanged";
        case RankingChange::comp_changed:
            return "comp_changed";
        case RankingChange::order_changed:
            return "order_changed";
    }
    return "unknown";
}

RankingChange compare_rankings(const OfficialRanking& base, const OfficialRanking& variant, std::size_t depth) {
    if (base.order.size() != variant.order.size()) throw UsageError("compare_rankings: different solver universes");
    if (depth < 1 || depth > base.order.size()) {
        throw UsageError("compare_rankings: depth " + std::to_string(depth) + " out of range");
    }
    const auto d = static_cast<std::ptrdiff_t>(depth);
    if (std::equal(base.order.begin(), base.order.begin() + d, variant.order.begin())) return RankingChange::unchanged;
    const std::set<std::size_t> a(base.order.begin(), base.order.begin() + d);
    const std::set<std::size_t> b(variant.order.begin(), variant.order.begin() + d);
    return a == b ? RankingChange::order_changed : RankingChange::comp_changed;
}

SensitivityReport leave_one_out_analysis(const Dataset& d, const AnalysisConfig& cfg, unsigned threads) {
    const auto instances = d.instances();
    if (instances.size() < 2) throw DataError("leave-one-out analysis needs at least 2 instances");

    const ScoringTable table(d, cfg.mechanism);
    SensitivityReport report;
    const auto full = table.score(all_runs(d));
    report.baseline = official_ranking(full, d, cfg.tiebreak);
    report.baseline_scores = full.scores;

    const std::size_t n_solvers = d.solver_count();
    const std::size_t depth10 = std::min<std::size_t>(10, n_solvers);
    const std::size_t depth3 = std::min<std::size_t>(3, n_solvers);

    report.instances.resize(instances.size());
    parallel_for(instances.size(), threads, [&](std::size_t i) {
        RunMultiset rest;
        rest.reserve(d.run_count());
        for (std::size_t r = 0; r < d.run_count(); ++r) {
            if (d.runs[r].instance_id != instances[i]) rest.push_back(r);
        }
        const auto variant = official_ranking(table.score(rest), d, cfg.tiebreak);

        auto& row = report.instances[i];
        row.instance = instances[i];
        row.any_change = variant.order != report.baseline.order;
        row.any_rank_change = variant.ranks != report.baseline.ranks;
        const auto top10 = compare_rankings(report.baseline, variant, depth10);
        const auto top3 = compare_rankings(report.baseline, variant, depth3);
        row.top10_comp = top10 == RankingChange::comp_changed;
        row.top10_order = top10 == RankingChange::order_changed;
        row.top3_comp = top3 == RankingChange::comp_changed;
        row.top3_order = top3 == RankingChange::order_changed;
    });

    for (const auto& row : report.instances) {
        report.counts.any_change += row.any_change;
        report.counts.any_rank_change += row.any_rank_change;
        report.counts.top10_comp += row.top10_comp;
        report.counts.top10_order += row.top10_order;
        report.counts.top3_comp += row.top3_comp;
        report.counts.top3_order += row.top3_order;
    }
    return report;
}

std::string sensitivity_csv(const SensitivityReport& report) {
    std::string out = "instance,any_change,top10_comp,top10_order,top3_comp,top3_order\n";
    auto flag = [](bool b) { return std::string(b ? "1" : "0"); };
    for (const auto& row : report.instances) {
        out += detail::csv_join({row.instance, flag(row.any_change), flag(row.top10_comp), flag(row.top10_order),
                                 flag(row.top3_comp), flag(row.top3_order)});
        out.push_back('\n');
    }
    return out;
}

}  // namespace rankbench

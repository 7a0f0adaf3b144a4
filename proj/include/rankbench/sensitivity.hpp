#pragma once

// Leave-one-instance-out fragility of the official ranking.

#include <cstddef>
#include <string>
#include <vector>

#include "rankbench/config.hpp"
#include "rankbench/model.hpp"
#include "rankbench/scoring.hpp"

namespace rankbench {

enum class RankingChange { unchanged, comp_changed, order_changed };

std::string_view to_string(RankingChange change);

/// Compares the first `depth` solvers of two listings: a different set is
/// comp_changed, the same set in a different sequence is order_changed.
/// Throws UsageError unless 1 <= depth <= |S|.
RankingChange compare_rankings(const OfficialRanking& base, const OfficialRanking& variant, std::size_t depth);

struct InstanceSensitivity {
    std::string instance;
    bool any_change = false;        // full listing order differs
    bool any_rank_change = false;   // some solver's rank number differs
    bool top10_comp = false;
    bool top10_order = false;
    bool top3_comp = false;
    bool top3_order = false;

    friend bool operator==(const InstanceSensitivity&, const InstanceSensitivity&) = default;
};

struct SensitivityCounts {
    std::size_t any_change = 0;
    std::size_t any_rank_change = 0;
    std::size_t top10_comp = 0;
    std::size_t top10_order = 0;
    std::size_t top3_comp = 0;
    std::size_t top3_order = 0;

    friend bool operator==(const SensitivityCounts&, const SensitivityCounts&) = default;
};

struct SensitivityReport {
    std::vector<InstanceSensitivity> instances;  // dataset instance order
    SensitivityCounts counts;
    OfficialRanking baseline;
    std::vector<double> baseline_scores;
};

/// Removes each instance (all of its seeds) in turn, rescoring the rest.
/// Depths larger than |S| are clamped to |S|.
SensitivityReport leave_one_out_analysis(const Dataset& d, const AnalysisConfig& cfg, unsigned threads = 0);

/// CSV with header `instance,any_change,top10_comp,top10_order,top3_comp,top3_order`.
std::string sensitivity_csv(const SensitivityReport& report);

}  // namespace rankbench

#pragma once

#include <cstdint>
#include <vector>

#include "rankbench/model.hpp"
#include "rankbench/scoring.hpp"

namespace rankbench {

inline constexpr std::size_t kDefaultReplicates = 10000;
inline constexpr double kDefaultAlpha = 0.05;

struct AnalysisConfig {
    Mechanism mechanism;
    std::size_t replicates = kDefaultReplicates;
    double alpha = kDefaultAlpha;
    std::uint64_t master_seed = 0;
    bool stratified = false;
    std::vector<TiebreakKey> tiebreak;

    friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

/// Throws UsageError unless replicates >= 1 and 0 < alpha < 1.
void validate_config(const AnalysisConfig& cfg);

enum class StratifyMode { automatic, on, off };

/// `automatic` stratifies exactly when the dataset declares two or more
/// strata.
bool resolve_stratified(StratifyMode mode, const Dataset& d);

}  // namespace rankbench

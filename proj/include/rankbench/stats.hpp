#pragma once

// Percentile confidence intervals, the one-sided bootstrap test and the
// Holm-Bonferroni step-down correction.

#include <cstddef>
#include <span>
#include <vector>

#include "rankbench/resampling.hpp"

namespace rankbench {

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double alpha = 0.0;

    friend bool operator==(const ConfidenceInterval&, const ConfidenceInterval&) = default;
};

struct TestOutcome {
    double p_value = 1.0;
    bool rejected = false;
};

/// 1-based nearest-rank position of quantile q in a sample of size k:
/// ceil(q * k), clamped to [1, k]. Products within 1e-9 of an integer are
/// snapped first, so 0.975 * 10000 selects position 9750.
std::size_t nearest_rank_position(double q, std::size_t k);

/// Nearest-rank quantile of an ascending-sorted sample.
template <typename T>
T sorted_quantile(std::span<const T> sorted, double q) {
    return sorted[nearest_rank_position(q, sorted.size()) - 1];
}

/// Nearest-rank quantile of an unsorted sample (copies and sorts).
double quantile(std::span<const double> samples, double q);

/// [alpha/2, 1 - alpha/2] nearest-rank interval. Throws UsageError on an
/// empty sample or alpha outside (0, 1).
ConfidenceInterval percentile_ci(std::span<const double> samples, double alpha);

/// Fraction of replicates in which column s1 scores <= column s2. Rejects
/// H0 "s1 is no better than s2" iff p < alpha.
TestOutcome bootstrap_p(const ScoreMatrix& m, std::size_t s1, std::size_t s2, double alpha = 0.05);
TestOutcome bootstrap_p(const ScoreMatrix& m, std::string_view s1, std::string_view s2, double alpha = 0.05);

/// Holm step-down threshold of the i-th smallest p-value (1-based) among m:
/// alpha / (m + 1 - i).
double holm_threshold(double alpha, std::size_t m, std::size_t i);

/// Indices (into `p_values`) of the rejected hypotheses, ascending.
std::vector<std::size_t> holm_bonferroni(std::span<const double> p_values, double alpha);

}  // namespace rankbench

#include "rankbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankbench/error.hpp"

namespace rankbench {

std::size_t nearest_rank_position(double q, std::size_t k) {
    if (k == 0) throw UsageError("quantile of an empty sample");
    const double x = q * static_cast<double>(k);
    const double nearest = std::round(x);
    const double pos = std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x)) ? nearest : std::ceil(x);
    if (pos < 1.0) return 1;
    if (pos > static_cast<double>(k)) return k;
    return static_cast<std::size_t>(pos);
}

double quantile(std::span<const double> samples, double q) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted_quantile<double>(sorted, q);
}

ConfidenceInterval percentile_ci(std::span<const double> samples, double alpha) {
    if (samples.empty()) throw UsageError("percentile_ci: empty sample");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("percentile_ci: alpha must lie in (0, 1)");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const std::span<const double> view(sorted);
    return {sorted_quantile(view, alpha / 2.0), sorted_quantile(view, 1.0 - alpha / 2.0), alpha};
}

TestOutcome bootstrap_p(const ScoreMatrix& m, std::size_t s1, std::size_t s2, double alpha) {
    if (s1 >= m.solver_count() || s2 >= m.solver_count()) throw DataError("bootstrap_p: solver index out of range");
    if (s1 == s2) throw UsageError("bootstrap_p: s1 and s2 must differ");
    if (m.replicates() == 0) throw UsageError("bootstrap_p: empty score matrix");
    std::size_t count = 0;
    for (std::size_t i = 0; i < m.replicates(); ++i) count += m.score(i, s1) <= m.score(i, s2) ? 1 : 0;
    const double p = static_cast<double>(count) / static_cast<double>(m.replicates());
    return {p, p < alpha};
}

TestOutcome bootstrap_p(const ScoreMatrix& m, std::string_view s1, std::string_view s2, double alpha) {
    return bootstrap_p(m, m.column_of(s1), m.column_of(s2), alpha);
}

double holm_threshold(double alpha, std::size_t m, std::size_t i) {
    return alpha / static_cast<double>(m + 1 - i);
}

std::vector<std::size_t> holm_bonferroni(std::span<const double> p_values, double alpha) {
    const std::size_t m = p_values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    std::vector<std::size_t> rejected;
    for (std::size_t step = 1; step <= m; ++step) {
        const std::size_t idx = order[step - 1];
        if (p_values[idx] >= holm_threshold(alpha, m, step)) break;
        rejected.push_back(idx);
    }
    std::sort(rejected.begin(), rejected.end());
    return rejected;
}

}  // namespace rankbench

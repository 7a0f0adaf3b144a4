#include "rankbench/ranking.hpp"

#include <algorithm>
#include <numeric>

#include "rankbench/error.hpp"
#include "rankbench/stats.hpp"

namespace rankbench {

namespace {

std::vector<std::size_t> all_columns(const ScoreMatrix& m) {
    std::vector<std::size_t> cols(m.solver_count());
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return cols;
}

std::vector<bool> membership(const SolverSubset& subset, std::size_t n) {
    std::vector<bool> in(n, !subset.has_value());
    if (subset) {
        for (auto s : *subset) {
            if (s < n) in[s] = true;
        }
    }
    return in;
}

std::size_t universe_size(const RobustRanking& rr) {
    std::size_t n = 0;
    for (const auto& g : rr.groups) {
        for (auto s : g.members) n = std::max(n, s + 1);
    }
    return n;
}

}  // namespace

std::vector<std::size_t> RobustRanking::group_of(std::size_t solver_count) const {
    std::vector<std::size_t> out(solver_count, 0);
    for (const auto& g : groups) {
        for (auto s : g.members) out.at(s) = g.index;
    }
    return out;
}

std::vector<double> RobustRanking::fractional_rank_of(std::size_t solver_count) const {
    std::vector<double> out(solver_count, 0.0);
    for (const auto& g : groups) {
        for (auto s : g.members) out.at(s) = g.fractional_rank;
    }
    return out;
}

std::vector<double> median_scores(const ScoreMatrix& m) {
    std::vector<double> out(m.solver_count());
    for (std::size_t s = 0; s < m.solver_count(); ++s) out[s] = quantile(m.score_column(s), 0.5);
    return out;
}

std::vector<std::size_t> first_place_counts(const ScoreMatrix& m, std::span<const std::size_t> active) {
    std::vector<std::size_t> counts(m.solver_count(), 0);
    if (active.empty()) return counts;
    for (std::size_t i = 0; i < m.replicates(); ++i) {
        const auto row = m.scores(i);
        double best = row[active.front()];
        for (auto s : active) best = std::max(best, row[s]);
        for (auto s : active) counts[s] += row[s] == best ? 1 : 0;
    }
    return counts;
}

WinTable empirical_win_fractions(const ScoreMatrix& m) {
    WinTable table;
    table.first_counts = first_place_counts(m, all_columns(m));
    table.fractions.resize(m.solver_count());
    for (std::size_t s = 0; s < m.solver_count(); ++s) {
        table.fractions[s] =
            m.replicates() == 0 ? 0.0 : static_cast<double>(table.first_counts[s]) / static_cast<double>(m.replicates());
    }
    return table;
}

std::size_t select_winner(const ScoreMatrix& m, std::span<const std::size_t> active, std::span<const double> medians) {
    if (active.empty()) throw UsageError("select_winner: no active solvers");
    const auto counts = first_place_counts(m, active);
    const auto& ids = m.solver_order();
    return *std::min_element(active.begin(), active.end(), [&](std::size_t a, std::size_t b) {
        if (counts[a] != counts[b]) return counts[a] > counts[b];
        if (medians[a] != medians[b]) return medians[a] > medians[b];
        return ids[a] < ids[b];
    });
}

std::size_t select_winner(const ScoreMatrix& m) {
    const auto cols = all_columns(m);
    const auto medians = median_scores(m);
    return select_winner(m, cols, medians);
}

std::vector<double> fractional_ranks(std::span<const std::size_t> group_sizes) {
    std::vector<double> out;
    out.reserve(group_sizes.size());
    std::size_t first = 1;
    for (auto size : group_sizes) {
        if (size == 0) throw UsageError("fractional_ranks: group sizes must be positive");
        const std::size_t last = first + size - 1;
        out.push_back(static_cast<double>(first + last) / 2.0);
        first = last + 1;
    }
    return out;
}

RobustRanking robust_ranking(const ScoreMatrix& m, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("robust_ranking: alpha must lie in (0, 1)");
    if (m.replicates() == 0) throw UsageError("robust_ranking: empty score matrix");
    const auto medians = median_scores(m);
    const auto& ids = m.solver_order();
    auto by_median = [&](std::size_t a, std::size_t b) {
        if (medians[a] != medians[b]) return medians[a] > medians[b];
        return ids[a] < ids[b];
    };

    RobustRanking rr;
    rr.alpha = alpha;
    std::vector<std::size_t> active = all_columns(m);

    while (!active.empty()) {
        RankingIteration it;
        it.winner = active.size() == 1 ? active.front() : select_winner(m, active, medians);
        for (auto s : active) {
            if (s != it.winner) it.candidates.push_back(s);
        }

        for (auto s : it.candidates) it.p_values.push_back(bootstrap_p(m, it.winner, s, alpha).p_value);
        const auto rejected_pos = holm_bonferroni(it.p_values, alpha);

        // Threshold each candidate was compared against, by its sorted step.
        const std::size_t n_tests = it.candidates.size();
        std::vector<std::size_t> order(n_tests);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return it.p_values[a] < it.p_values[b]; });
        it.thresholds.resize(n_tests);
        for (std::size_t step = 0; step < n_tests; ++step) {
            it.thresholds[order[step]] = holm_threshold(alpha, n_tests, step + 1);
        }

        std::vector<bool> demoted(n_tests, false);
        for (auto pos : rejected_pos) demoted[pos] = true;

        RankGroup group;
        group.index = rr.groups.size() + 1;
        group.members.push_back(it.winner);
        std::vector<std::size_t> next;
        for (std::size_t j = 0; j < n_tests; ++j) {
            if (demoted[j]) {
                it.rejected.push_back(it.candidates[j]);
                next.push_back(it.candidates[j]);
            } else {
                group.members.push_back(it.candidates[j]);
            }
        }
        std::sort(group.members.begin(), group.members.end(), by_median);
        rr.groups.push_back(std::move(group));
        rr.iterations.push_back(std::move(it));
        active = std::move(next);
    }

    std::vector<std::size_t> sizes;
    for (const auto& g : rr.groups) sizes.push_back(g.members.size());
    const auto ranks = fractional_ranks(sizes);
    for (std::size_t g = 0; g < rr.groups.size(); ++g) rr.groups[g].fractional_rank = ranks[g];
    return rr;
}

std::size_t tied_pair_count(const RobustRanking& rr, const SolverSubset& subset) {
    const auto in = membership(subset, universe_size(rr));
    std::size_t total = 0;
    for (const auto& g : rr.groups) {
        const auto n = static_cast<std::size_t>(std::count_if(g.members.begin(), g.members.end(), [&](auto s) { return in[s]; }));
        if (n >= 2) total += n * (n - 1) / 2;
    }
    return total;
}

std::size_t group_count(const RobustRanking& rr, const SolverSubset& subset) {
    const auto in = membership(subset, universe_size(rr));
    return static_cast<std::size_t>(std::count_if(rr.groups.begin(), rr.groups.end(), [&](const RankGroup& g) {
        return std::any_of(g.members.begin(), g.members.end(), [&](auto s) { return in[s]; });
    }));
}

InversionResult inversion_count(const OfficialRanking& official, const RobustRanking& rr, const SolverSubset& subset) {
    const std::size_t n = official.ranks.size();
    const auto group = rr.group_of(n);
    const auto in = membership(subset, n);
    InversionResult out;
    for (std::size_t a = 0; a < n; ++a) {
        if (!in[a]) continue;
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b || !in[b]) continue;
            if (official.ranks[a] > official.ranks[b] && group[a] < group[b]) out.pairs.emplace_back(a, b);
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    out.count = out.pairs.size();
    return out;
}

double rank_iqr(const ScoreMatrix& m, std::size_t solver) {
    auto col = m.rank_column(solver);
    std::sort(col.begin(), col.end());
    const std::span<const std::int32_t> view(col);
    return static_cast<double>(sorted_quantile(view, 0.75) - sorted_quantile(view, 0.25));
}

double score_iqr(const ScoreMatrix& m, std::size_t solver) {
    auto col = m.score_column(solver);
    std::sort(col.begin(), col.end());
    const std::span<const double> view(col);
    return sorted_quantile(view, 0.75) - sorted_quantile(view, 0.25);
}

double mean_rank_iqr(const ScoreMatrix& m, const SolverSubset& subset) {
    const auto cols = subset ? *subset : all_columns(m);
    if (cols.empty()) throw UsageError("mean_rank_iqr: empty subset");
    double sum = 0.0;
    for (auto s : cols) sum += rank_iqr(m, s);
    return sum / static_cast<double>(cols.size());
}

std::vector<std::size_t> top_subset(const OfficialRanking& official, std::size_t n) {
    n = std::min(n, official.order.size());
    return {official.order.begin(), official.order.begin() + static_cast<std::ptrdiff_t>(n)};
}

Diagnostics compute_diagnostics(const ScoreMatrix& m, const OfficialRanking& official, const RobustRanking& rr,
                                const SolverSubset& subset) {
    Diagnostics d;
    d.groups = group_count(rr, subset);
    d.ties = tied_pair_count(rr, subset);
    d.inversions = inversion_count(official, rr, subset);
    d.mean_rank_iqr = mean_rank_iqr(m, subset);
    return d;
}

}  // namespace rankbench

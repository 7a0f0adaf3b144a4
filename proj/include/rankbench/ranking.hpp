#pragma once

// Robust grouped ranking, empirical win fractions and ranking diagnostics
// (tied pairs, inversions, rank IQR).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rankbench/resampling.hpp"
#include "rankbench/scoring.hpp"

namespace rankbench {

/// Solver indices (matrix column order). An absent subset means all solvers.
using SolverSubset = std::optional<std::vector<std::size_t>>;

struct RankGroup {
    std::size_t index = 0;             // 1-based
    std::vector<std::size_t> members;  // by median score desc, then id asc
    double fractional_rank = 0.0;

    friend bool operator==(const RankGroup&, const RankGroup&) = default;
};

/// One round of the grouping procedure: the chosen winner, each remaining
/// candidate's p-value against it with its Holm threshold, and the
/// candidates whose null hypothesis was rejected (demoted to later groups).
struct RankingIteration {
    std::size_t winner = 0;
    std::vector<std::size_t> candidates;
    std::vector<double> p_values;
    std::vector<double> thresholds;
    std::vector<std::size_t> rejected;

    friend bool operator==(const RankingIteration&, const RankingIteration&) = default;
};

struct RobustRanking {
    std::vector<RankGroup> groups;
    std::vector<RankingIteration> iterations;
    double alpha = 0.05;

    /// 1-based group index per solver.
    std::vector<std::size_t> group_of(std::size_t solver_count) const;
    /// Fractional rank per solver.
    std::vector<double> fractional_rank_of(std::size_t solver_count) const;

    friend bool operator==(const RobustRanking&, const RobustRanking&) = default;
};

struct WinTable {
    std::vector<std::size_t> first_counts;
    std::vector<double> fractions;
};

/// Nearest-rank median of every score column.
std::vector<double> median_scores(const ScoreMatrix& m);

/// Replicates in which each solver of `active` has no strictly better
/// solver among `active`. Entries of inactive solvers are 0.
std::vector<std::size_t> first_place_counts(const ScoreMatrix& m, std::span<const std::size_t> active);

/// First-place fractions over all solvers, ties counted for every tied
/// solver (the fractions may sum to more than 1).
WinTable empirical_win_fractions(const ScoreMatrix& m);

/// Solver with the most first places among `active`; ties go to the
/// higher median score, then the smaller solver id.
std::size_t select_winner(const ScoreMatrix& m, std::span<const std::size_t> active, std::span<const double> medians);
std::size_t select_winner(const ScoreMatrix& m);

/// Iterated winner selection + Holm-corrected one-sided tests against the
/// winner. Candidates whose null "winner is no better" survives join the
/// winner's group; the rest go to the next round.
RobustRanking robust_ranking(const ScoreMatrix& m, double alpha);

/// Mid-rank (a + b) / 2 of each group occupying positions a..b.
std::vector<double> fractional_ranks(std::span<const std::size_t> group_sizes);

/// Sum over groups of C(n_g, 2), n_g counting members inside the subset.
std::size_t tied_pair_count(const RobustRanking& rr, const SolverSubset& subset = std::nullopt);

/// Number of groups with at least one member inside the subset.
std::size_t group_count(const RobustRanking& rr, const SolverSubset& subset = std::nullopt);

struct InversionResult {
    std::size_t count = 0;
    /// (a, b): a is ranked officially below b but sits in an earlier group.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

InversionResult inversion_count(const OfficialRanking& official, const RobustRanking& rr,
                                const SolverSubset& subset = std::nullopt);

/// Nearest-rank IQR (0.75 - 0.25 quantile) of one solver's replicate ranks.
double rank_iqr(const ScoreMatrix& m, std::size_t solver);
/// Same on replicate scores; an optional diagnostic.
double score_iqr(const ScoreMatrix& m, std::size_t solver);

/// Mean rank IQR over the subset (all solvers if absent).
double mean_rank_iqr(const ScoreMatrix& m, const SolverSubset& subset = std::nullopt);

/// The first n solvers of the official listing (n clamped to |S|).
std::vector<std::size_t> top_subset(const OfficialRanking& official, std::size_t n);

struct Diagnostics {
    std::size_t groups = 0;
    std::size_t ties = 0;
    InversionResult inversions;
    double mean_rank_iqr = 0.0;
};

Diagnostics compute_diagnostics(const ScoreMatrix& m, const OfficialRanking& official, const RobustRanking& rr,
                                const SolverSubset& subset = std::nullopt);

}  // namespace rankbench

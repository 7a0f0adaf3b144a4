#pragma once

// Competition scoring mechanisms and the official (min-rank) ranking.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rankbench/model.hpp"

namespace rankbench {

enum class MechanismKind { solved_count, optimal_count, par_k, ipc_quality, ipc_agile, mean_metric };

std::string_view to_string(MechanismKind kind);
std::optional<MechanismKind> parse_mechanism(std::string_view token);

struct Mechanism {
    MechanismKind kind = MechanismKind::solved_count;
    int par_factor = 10;  // only used by par_k

    friend bool operator==(const Mechanism&, const Mechanism&) = default;
};

/// Indices into Dataset::runs, repetition allowed.
using RunMultiset = std::vector<std::size_t>;

/// Every run of the dataset exactly once, in dataset order.
RunMultiset all_runs(const Dataset& d);

/// Per-solver scores over one multiset of runs, higher is better.
/// `success_time` holds the total cpu_time over successful entries and feeds
/// the total_time tie-break key.
struct ScoreVector {
    std::vector<double> scores;
    std::vector<double> success_time;
};

/// Precomputed per-(solver, run) contribution of a mechanism.
///
/// Every supported mechanism is a sum of per-entry contributions, optionally
/// divided by the multiset size (par_k, mean_metric), so scoring a replicate
/// only needs table lookups. Building the table validates the mechanism's
/// data requirements for every run in the dataset.
class ScoringTable {
public:
    ScoringTable(const Dataset& d, const Mechanism& mechanism);

    std::size_t solver_count() const { return solvers_; }
    std::size_t run_count() const { return runs_; }
    const Mechanism& mechanism() const { return mechanism_; }

    double contribution(std::size_t solver, std::size_t run) const { return contrib_[solver * runs_ + run]; }
    double success_time(std::size_t solver, std::size_t run) const { return time_[solver * runs_ + run]; }

    /// Scores the multiset; entries are summed in multiset order.
    ScoreVector score(std::span<const std::size_t> entries) const;

    /// Same as score() but writes into caller-owned buffers of size
    /// solver_count().
    void score_into(std::span<const std::size_t> entries, std::span<double> scores,
                    std::span<double> success_time) const;

private:
    Mechanism mechanism_;
    std::size_t solvers_ = 0;
    std::size_t runs_ = 0;
    bool averaged_ = false;
    std::vector<double> contrib_;
    std::vector<double> time_;
};

/// Scores of all solvers on the multiset `rs`.
///
/// Throws DataError if reference data required by the mechanism is missing
/// (ipc_quality needs best_known_quality, ipc_agile needs reference_time),
/// if mean_metric meets a record without quality, or if par_k is used with
/// an unbounded cutoff.
ScoreVector compute_scores(const Dataset& d, const Mechanism& mechanism, const RunMultiset& rs);

/// Per-entry contribution of one record, exposed for testing.
double entry_contribution(const Mechanism& mechanism, const RunRecord& record, double cutoff,
                          const ReferenceData* reference);

enum class TiebreakKey { total_time, solver_id };

std::string_view to_string(TiebreakKey key);
std::optional<TiebreakKey> parse_tiebreak(std::string_view token);

struct OfficialRanking {
    std::vector<std::size_t> order;  // solver indices, listing order
    std::vector<std::int32_t> ranks;  // per solver index, min-rank on score
};

/// Sorts solvers by score (desc), then the tie-break chain, then solver id.
///
/// Ranks are min-ranks ("1224") over scores alone: the chain decides the
/// listing order among equal scores but never separates their ranks.
OfficialRanking official_ranking(const ScoreVector& sv, const Dataset& d, std::span<const TiebreakKey> tiebreak);

/// Min-ranks of a score row. rank[i] = 1 + number of strictly greater
/// scores.
void min_ranks(std::span<const double> scores, std::span<std::int32_t> ranks);

}  // namespace rankbench

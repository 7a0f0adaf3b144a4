#pragma once

// Bootstrap replicates of a competition and the resulting score matrix.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rankbench/config.hpp"
#include "rankbench/model.hpp"
#include "rankbench/rng.hpp"
#include "rankbench/scoring.hpp"

namespace rankbench {

/// |R| runs drawn i.i.d. uniformly from the dataset's runs.
RunMultiset draw_uniform_replicate(const Dataset& d, ReplicateStream& rng);

/// Per stratum (in first-appearance order), as many runs as the stratum
/// holds, drawn with replacement from within the stratum.
RunMultiset draw_stratified_replicate(const Dataset& d, ReplicateStream& rng);

/// Same as draw_stratified_replicate with a precomputed partition.
RunMultiset draw_stratified_replicate(std::span<const Stratum> strata, ReplicateStream& rng);

struct MatrixProvenance {
    std::uint64_t master_seed = 0;
    bool stratified = false;
    Mechanism mechanism;

    friend bool operator==(const MatrixProvenance&, const MatrixProvenance&) = default;
};

/// k x |S| replicate scores (row-major) with per-row min-ranks.
class ScoreMatrix {
public:
    ScoreMatrix() = default;
    ScoreMatrix(std::vector<std::string> solver_order, std::size_t replicates, MatrixProvenance provenance);

    std::size_t replicates() const { return k_; }
    std::size_t solver_count() const { return solvers_.size(); }
    const std::vector<std::string>& solver_order() const { return solvers_; }
    const MatrixProvenance& provenance() const { return provenance_; }

    std::span<const double> scores(std::size_t replicate) const {
        return {scores_.data() + replicate * solvers_.size(), solvers_.size()};
    }
    std::span<double> scores(std::size_t replicate) {
        return {scores_.data() + replicate * solvers_.size(), solvers_.size()};
    }
    std::span<const std::int32_t> ranks(std::size_t replicate) const {
        return {ranks_.data() + replicate * solvers_.size(), solvers_.size()};
    }
    std::span<std::int32_t> ranks(std::size_t replicate) {
        return {ranks_.data() + replicate * solvers_.size(), solvers_.size()};
    }

    double score(std::size_t replicate, std::size_t solver) const { return scores_[replicate * solvers_.size() + solver]; }
    std::int32_t rank(std::size_t replicate, std::size_t solver) const { return ranks_[replicate * solvers_.size() + solver]; }

    /// Copies of one solver's score / rank column.
    std::vector<double> score_column(std::size_t solver) const;
    std::vector<std::int32_t> rank_column(std::size_t solver) const;

    /// Column index of a solver id; throws DataError if unknown.
    std::size_t column_of(std::string_view solver_id) const;

    /// Recomputes every row's ranks from its scores.
    void rerank();

    /// CSV dump with header `replicate,<solver ids...>`.
    std::string to_csv() const;

    friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;

private:
    std::vector<std::string> solvers_;
    std::size_t k_ = 0;
    MatrixProvenance provenance_;
    std::vector<double> scores_;
    std::vector<std::int32_t> ranks_;
};

/// Builds the replicate score matrix. Row i is scored on the replicate drawn
/// from ReplicateStream(cfg.master_seed, i); the result is bit-identical for
/// any `threads` value (0 = hardware concurrency).
ScoreMatrix generate_score_matrix(const Dataset& d, const AnalysisConfig& cfg, unsigned threads = 0);

/// Builds a matrix directly from rows of scores (ranks are derived). Used by
/// tests and tools that analyse externally produced replicates.
ScoreMatrix matrix_from_rows(std::vector<std::string> solver_order, const std::vector<std::vector<double>>& rows,
                             MatrixProvenance provenance = {});

}  // namespace rankbench

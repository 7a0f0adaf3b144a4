#include "rankbench/resampling.hpp"

#include <algorithm>
#include <cmath>

#include "rankbench/error.hpp"
#include "rankbench/parallel.hpp"
#include "text_io.hpp"

namespace rankbench {

void validate_config(const AnalysisConfig& cfg) {
    if (cfg.replicates < 1) throw UsageError("replicates must be >= 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
}

bool resolve_stratified(StratifyMode mode, const Dataset& d) {
    switch (mode) {
        case StratifyMode::on:
            return true;
        case StratifyMode::off:
            return false;
        case StratifyMode::automatic:
            break;
    }
    return d.partition_by_stratum().size() >= 2;
}

RunMultiset draw_uniform_replicate(const Dataset& d, ReplicateStream& rng) {
    const std::size_t n = d.run_count();
    RunMultiset rs(n);
    for (auto& entry : rs) entry = rng.bounded(n);
    return rs;
}

RunMultiset draw_stratified_replicate(std::span<const Stratum> strata, ReplicateStream& rng) {
    RunMultiset rs;
    for (const auto& stratum : strata) {
        const std::size_t n = stratum.runs.size();
        for (std::size_t j = 0; j < n; ++j) rs.push_back(stratum.runs[rng.bounded(n)]);
    }
    return rs;
}

RunMultiset draw_stratified_replicate(const Dataset& d, ReplicateStream& rng) {
    const auto strata = d.partition_by_stratum();
    return draw_stratified_replicate(strata, rng);
}

ScoreMatrix::ScoreMatrix(std::vector<std::string> solver_order, std::size_t replicates, MatrixProvenance provenance)
    : solvers_(std::move(solver_order)),
      k_(replicates),
      provenance_(provenance),
      scores_(k_ * solvers_.size(), 0.0),
      ranks_(k_ * solvers_.size(), 1) {}

std::vector<double> ScoreMatrix::score_column(std::size_t solver) const {
    std::vector<double> col(k_);
    for (std::size_t i = 0; i < k_; ++i) col[i] = score(i, solver);
    return col;
}

std::vector<std::int32_t> ScoreMatrix::rank_column(std::size_t solver) const {
    std::vector<std::int32_t> col(k_);
    for (std::size_t i = 0; i < k_; ++i) col[i] = rank(i, solver);
    return col;
}

std::size_t ScoreMatrix::column_of(std::string_view solver_id) const {
    auto it = std::find(solvers_.begin(), solvers_.end(), solver_id);
    if (it == solvers_.end()) throw DataError("unknown solver '" + std::string(solver_id) + "'");
    return static_cast<std::size_t>(it - solvers_.begin());
}

void ScoreMatrix::rerank() {
    for (std::size_t i = 0; i < k_; ++i) min_ranks(scores(i), ranks(i));
}

std::string ScoreMatrix::to_csv() const {
    std::vector<std::string> header{"replicate"};
    header.insert(header.end(), solvers_.begin(), solvers_.end());
    std::string out = detail::csv_join(header) + "\n";
    for (std::size_t i = 0; i < k_; ++i) {
        out += std::to_string(i);
        for (double v : scores(i)) {
            out.push_back(',');
            out += detail::format_double(v);
        }
        out.push_back('\n');
    }
    return out;
}

ScoreMatrix generate_score_matrix(const Dataset& d, const AnalysisConfig& cfg, unsigned threads) {
    validate_config(cfg);
    const ScoringTable table(d, cfg.mechanism);
    const auto strata = d.partition_by_stratum();
    ScoreMatrix m(d.solvers, cfg.replicates, MatrixProvenance{cfg.master_seed, cfg.stratified, cfg.mechanism});

    const std::size_t n = d.solver_count();
    parallel_for(cfg.replicates, threads, [&](std::size_t i) {
        ReplicateStream rng(cfg.master_seed, i);
        const RunMultiset rs = cfg.stratified ? draw_stratified_replicate(strata, rng) : draw_uniform_replicate(d, rng);
        std::vector<double> time(n);
        auto row = m.scores(i);
        table.score_into(rs, row, time);
        for (double v : row) {
            if (!std::isfinite(v)) throw DataError("replicate " + std::to_string(i) + ": non-finite score");
        }
        min_ranks(row, m.ranks(i));
    });
    return m;
}

ScoreMatrix matrix_from_rows(std::vector<std::string> solver_order, const std::vector<std::vector<double>>& rows,
                             MatrixProvenance provenance) {
    ScoreMatrix m(std::move(solver_order), rows.size(), provenance);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.solver_count()) throw DataError("matrix row " + std::to_string(i) + " has wrong width");
        std::copy(rows[i].begin(), rows[i].end(), m.scores(i).begin());
    }
    m.rerank();
    return m;
}

}  // namespace rankbench

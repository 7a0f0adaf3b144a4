#include "rankbench/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankbench/error.hpp"

namespace rankbench {

namespace {

constexpr std::pair<MechanismKind, std::string_view> kMechanismTokens[] = {
    {MechanismKind::solved_count, "solved_count"}, {MechanismKind::optimal_count, "optimal_count"},
    {MechanismKind::par_k, "par_k"},               {MechanismKind::ipc_quality, "ipc_quality"},
    {MechanismKind::ipc_agile, "ipc_agile"},       {MechanismKind::mean_metric, "mean_metric"},
};

constexpr std::pair<TiebreakKey, std::string_view> kTiebreakTokens[] = {
    {TiebreakKey::total_time, "total_time"},
    {TiebreakKey::solver_id, "solver_id"},
};

bool solved_within_cutoff(const RunRecord& rec, double cutoff) {
    return is_solved_status(rec.status) && rec.cpu_time <= cutoff;
}

bool is_averaged(MechanismKind kind) {
    return kind == MechanismKind::par_k || kind == MechanismKind::mean_metric;
}

void check_mechanism(const Mechanism& m, const Dataset& d) {
    if (m.kind == MechanismKind::par_k) {
        if (m.par_factor < 1) throw UsageError("par_k factor must be >= 1");
        if (!std::isfinite(d.cutoff)) throw DataError("par_k needs a finite cutoff (set cutoff_seconds)");
    }
}

}  // namespace

std::string_view to_string(MechanismKind kind) {
    for (const auto& [k, token] : kMechanismTokens) {
        if (k == kind) return token;
    }
    return "unknown";
}

std::optional<MechanismKind> parse_mechanism(std::string_view token) {
    for (const auto& [k, name] : kMechanismTokens) {
        if (name == token) return k;
    }
    return std::nullopt;
}

std::string_view to_string(TiebreakKey key) {
    for (const auto& [k, token] : kTiebreakTokens) {
        if (k == key) return token;
    }
    return "unknown";
}

std::optional<TiebreakKey> parse_tiebreak(std::string_view token) {
    for (const auto& [k, name] : kTiebreakTokens) {
        if (name == token) return k;
    }
    return std::nullopt;
}

RunMultiset all_runs(const Dataset& d) {
    RunMultiset rs(d.run_count());
    std::iota(rs.begin(), rs.end(), std::size_t{0});
    return rs;
}

double entry_contribution(const Mechanism& mechanism, const RunRecord& rec, double cutoff,
                          const ReferenceData* reference) {
    switch (mechanism.kind) {
        case MechanismKind::solved_count:
            return solved_within_cutoff(rec, cutoff) ? 1.0 : 0.0;
        case MechanismKind::optimal_count:
            return rec.status == RunStatus::solved_optimal ? 1.0 : 0.0;
        case MechanismKind::par_k:
            return -(solved_within_cutoff(rec, cutoff) ? rec.cpu_time : mechanism.par_factor * cutoff);
        case MechanismKind::ipc_quality: {
            if (!reference || !reference->best_known_quality) {
                throw DataError("ipc_quality needs best_known_quality");
            }
            if (!solved_within_cutoff(rec, cutoff)) return 0.0;
            if (!rec.quality) throw DataError("ipc_quality: solved run without quality");
            if (!(*rec.quality > 0.0)) throw DataError("ipc_quality: solved run with quality 0");
            return *reference->best_known_quality / *rec.quality;
        }
        case MechanismKind::ipc_agile: {
            if (!reference || !reference->reference_time) throw DataError("ipc_agile needs reference_time");
            if (!solved_within_cutoff(rec, cutoff)) return 0.0;
            const double ratio = std::max(rec.cpu_time, 1.0) / std::max(*reference->reference_time, 1.0);
            // Runs at or below the reference time score a full point.
            return 1.0 / (1.0 + std::max(0.0, std::log10(ratio)));
        }
        case MechanismKind::mean_metric:
            if (!rec.quality) throw DataError("mean_metric needs a quality value on every record");
            return *rec.quality;
    }
    throw UsageError("unknown mechanism");
}

ScoringTable::ScoringTable(const Dataset& d, const Mechanism& mechanism)
    : mechanism_(mechanism),
      solvers_(d.solver_count()),
      runs_(d.run_count()),
      averaged_(is_averaged(mechanism.kind)),
      contrib_(solvers_ * runs_),
      time_(solvers_ * runs_) {
    check_mechanism(mechanism, d);
    for (std::size_t r = 0; r < runs_; ++r) {
        const auto* ref = d.reference_for(r);
        for (std::size_t s = 0; s < solvers_; ++s) {
            const auto& rec = d.record(s, r);
            try {
                contrib_[s * runs_ + r] = entry_contribution(mechanism, rec, d.cutoff, ref);
            } catch (const DataError& e) {
                throw DataError(std::string(e.what()) + " at (" + d.solvers[s] + ", " + to_string(d.runs[r]) + ")");
            }
            time_[s * runs_ + r] = solved_within_cutoff(rec, d.cutoff) ? rec.cpu_time : 0.0;
        }
    }
}

void ScoringTable::score_into(std::span<const std::size_t> entries, std::span<double> scores,
                              std::span<double> success_time) const {
    for (std::size_t s = 0; s < solvers_; ++s) {
        const double* c = contrib_.data() + s * runs_;
        const double* t = time_.data() + s * runs_;
        double sum = 0.0;
        double time = 0.0;
        for (std::size_t r : entries) {
            sum += c[r];
            time += t[r];
        }
        if (averaged_) sum = entries.empty() ? 0.0 : sum / static_cast<double>(entries.size());
        scores[s] = sum;
        success_time[s] = time;
    }
}

ScoreVector ScoringTable::score(std::span<const std::size_t> entries) const {
    ScoreVector sv{std::vector<double>(solvers_), std::vector<double>(solvers_)};
    score_into(entries, sv.scores, sv.success_time);
    return sv;
}

ScoreVector compute_scores(const Dataset& d, const Mechanism& mechanism, const RunMultiset& rs) {
    check_mechanism(mechanism, d);
    const std::size_t n = d.solver_count();
    ScoreVector sv{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t r : rs) {
        if (r >= d.run_count()) throw DataError("run index " + std::to_string(r) + " out of range");
        const auto* ref = d.reference_for(r);
        for (std::size_t s = 0; s < n; ++s) {
            const auto& rec = d.record(s, r);
            try {
                sv.scores[s] += entry_contribution(mechanism, rec, d.cutoff, ref);
            } catch (const DataError& e) {
                throw DataError(std::string(e.what()) + " at (" + d.solvers[s] + ", " + to_string(d.runs[r]) + ")");
            }
            if (solved_within_cutoff(rec, d.cutoff)) sv.success_time[s] += rec.cpu_time;
        }
    }
    if (is_averaged(mechanism.kind)) {
        for (auto& v : sv.scores) v = rs.empty() ? 0.0 : v / static_cast<double>(rs.size());
    }
    return sv;
}

void min_ranks(std::span<const double> scores, std::span<std::int32_t> ranks) {
    const std::size_t n = scores.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::int32_t better = 0;
        for (std::size_t j = 0; j < n; ++j) better += scores[j] > scores[i] ? 1 : 0;
        ranks[i] = better + 1;
    }
}

OfficialRanking official_ranking(const ScoreVector& sv, const Dataset& d, std::span<const TiebreakKey> tiebreak) {
    const std::size_t n = sv.scores.size();
    OfficialRanking out;
    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});

    auto less = [&](std::size_t a, std::size_t b) {
        if (sv.scores[a] != sv.scores[b]) return sv.scores[a] > sv.scores[b];
        for (auto key : tiebreak) {
            switch (key) {
                case TiebreakKey::total_time:
                    if (sv.success_time[a] != sv.success_time[b]) return sv.success_time[a] < sv.success_time[b];
                    break;
                case TiebreakKey::solver_id:
                    if (d.solvers[a] != d.solvers[b]) return d.solvers[a] < d.solvers[b];
                    break;
            }
        }
        return d.solvers[a] < d.solvers[b];
    };
    std::sort(out.order.begin(), out.order.end(), less);

    out.ranks.resize(n);
    min_ranks(sv.scores, out.ranks);
    return out;
}

}  // namespace rankbench

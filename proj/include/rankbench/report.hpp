#pragma once

// Analysis report assembly and emission (canonical JSON, CSV tables and
// confidence-interval plot data).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rankbench/config.hpp"
#include "rankbench/model.hpp"
#include "rankbench/resampling.hpp"
#include "rankbench/sensitivity.hpp"

namespace rankbench {

struct SolverSummary {
    std::string id;
    std::int32_t official_rank = 0;
    double official_score = 0.0;
    double median_score = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    double win_fraction = 0.0;
    std::size_t first_place_count = 0;
    std::size_t group = 0;
    double fractional_rank = 0.0;
    double rank_iqr = 0.0;
    double score_iqr = 0.0;

    friend bool operator==(const SolverSummary&, const SolverSummary&) = default;
};

struct ReportGroup {
    std::size_t index = 0;
    double fractional_rank = 0.0;
    std::vector<std::string> members;

    friend bool operator==(const ReportGroup&, const ReportGroup&) = default;
};

struct ReportIteration {
    std::string winner;
    std::vector<std::string> candidates;
    std::vector<double> p_values;
    std::vector<double> thresholds;
    std::vector<std::string> rejected;

    friend bool operator==(const ReportIteration&, const ReportIteration&) = default;
};

struct DiagnosticsBlock {
    std::vector<std::string> solvers;  // the subset, official listing order
    std::size_t groups = 0;
    std::size_t ties = 0;
    std::size_t inversions = 0;
    std::vector<std::pair<std::string, std::string>> inversion_pairs;
    double mean_rank_iqr = 0.0;

    friend bool operator==(const DiagnosticsBlock&, const DiagnosticsBlock&) = default;
};

struct SensitivitySection {
    std::vector<std::string> baseline_order;
    SensitivityCounts counts;
    std::vector<InstanceSensitivity> instances;

    friend bool operator==(const SensitivitySection&, const SensitivitySection&) = default;
};

struct DatasetSummary {
    std::size_t solvers = 0;
    std::size_t runs = 0;
    std::size_t instances = 0;
    std::size_t strata = 0;

    friend bool operator==(const DatasetSummary&, const DatasetSummary&) = default;
};

struct AnalysisReport {
    AnalysisConfig config;
    DatasetSummary dataset;
    std::vector<std::string> official_order;
    std::vector<SolverSummary> solvers;  // dataset order
    std::vector<ReportGroup> groups;
    std::vector<ReportIteration> iterations;
    DiagnosticsBlock all;
    DiagnosticsBlock top10;
    DiagnosticsBlock top3;
    std::optional<SensitivitySection> sensitivity;

    friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

/// Assembles every analysis product. Throws DataError if the matrix was not
/// produced for this dataset and config (solver order, k, seed,
/// stratification or mechanism differ).
AnalysisReport build_report(const Dataset& d, const AnalysisConfig& cfg, const ScoreMatrix& m,
                            const SensitivityReport* sensitivity = nullptr);

nlohmann::json to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const nlohmann::json& j);

/// Canonical text: sorted keys, 2-space indent, shortest round-trip floats.
std::string report_json_text(const AnalysisReport& r);

/// Rows of the plot-data CSV (header
/// `solver,official_rank,official_score,median_score,ci_lower,ci_upper`),
/// the first `top` solvers of the official listing.
std::string plot_data_csv(const AnalysisReport& r, std::size_t top = 10);

void emit_json(const AnalysisReport& r, const std::filesystem::path& path);
void emit_plot_data(const AnalysisReport& r, const std::filesystem::path& path, std::size_t top = 10);

/// Writes solvers.csv, groups.csv, diagnostics.csv and, when present,
/// sensitivity.csv into `dir` (created if needed).
void emit_csv(const AnalysisReport& r, const std::filesystem::path& dir);

/// Recomputes every derived quantity from the raw report sections and
/// returns one line per mismatch; empty when the report is self-consistent.
std::vector<std::string> check_report_consistency(const AnalysisReport& r);

}  // namespace rankbench

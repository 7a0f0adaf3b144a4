#pragma once

// Competition data model: solvers, runs, strata and the total result table.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rankbench {

enum class RunStatus { solved, solved_optimal, unsolved, timeout, crashed, incorrect };

std::string_view to_string(RunStatus status);
std::optional<RunStatus> parse_status(std::string_view token);

/// True for the two statuses that can earn credit under any mechanism.
constexpr bool is_solved_status(RunStatus s) {
    return s == RunStatus::solved || s == RunStatus::solved_optimal;
}

struct RunKey {
    std::string instance_id;
    std::uint64_t seed = 0;

    friend auto operator<=>(const RunKey&, const RunKey&) = default;
};

/// "instance@seed", the key format used by the reference block of the config.
std::string to_string(const RunKey& key);

struct RunRecord {
    RunStatus status = RunStatus::unsolved;
    double cpu_time = 0.0;
    std::optional<double> quality;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct ReferenceData {
    std::optional<double> best_known_quality;
    std::optional<double> reference_time;

    friend bool operator==(const ReferenceData&, const ReferenceData&) = default;
};

inline constexpr std::string_view kDefaultStratum = "default";

/// A stratum label together with the indices (into Dataset::runs) of its runs.
struct Stratum {
    std::string label;
    std::vector<std::size_t> runs;
};

/// Full competition result table. Immutable once built; all analysis code
/// takes it by const reference.
///
/// `results` is solver-major: the record of solver s on run r lives at
/// `results[s * runs.size() + r]`.
struct Dataset {
    std::vector<std::string> solvers;
    std::vector<RunKey> runs;
    std::map<std::string, std::string> strata;  // instance_id -> label
    std::vector<RunRecord> results;
    double cutoff = 0.0;
    std::map<RunKey, ReferenceData> reference;

    std::size_t solver_count() const { return solvers.size(); }
    std::size_t run_count() const { return runs.size(); }

    const RunRecord& record(std::size_t solver, std::size_t run) const {
        return results[solver * runs.size() + run];
    }

    /// Index of a solver id, or nullopt.
    std::optional<std::size_t> solver_index(std::string_view id) const;

    /// Reference entry for a run, or nullptr.
    const ReferenceData* reference_for(std::size_t run) const;

    /// Strata in order of first appearance in `runs`.
    std::vector<Stratum> partition_by_stratum() const;

    /// Distinct instance ids in order of first appearance in `runs`.
    std::vector<std::string> instances() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Every invariant violation of `d`, one human-readable line each. Empty iff
/// the dataset is valid.
std::vector<std::string> validate_dataset(const Dataset& d);

enum class InputFormat { csv, json };

/// Picks the format from the file extension (".json" -> json, else csv).
InputFormat infer_format(const std::filesystem::path& path);

/// Loads run results and, optionally, the competition config (cutoff,
/// strata, reference data). Without a config the cutoff is unbounded and
/// every instance lands in the "default" stratum.
///
/// Throws ParseError for malformed input and DataError for duplicate or
/// missing (solver, run) results, or when the loaded dataset fails
/// validate_dataset.
Dataset load_dataset(const std::filesystem::path& results_path, InputFormat format,
                     const std::optional<std::filesystem::path>& config_path = std::nullopt);

/// In-memory variants of the loaders, used by load_dataset and the tests.
Dataset parse_dataset(std::string_view results_text, InputFormat format,
                      std::optional<std::string_view> config_text = std::nullopt);

/// Serializes the result table in the given format (CSV rows or JSON
/// objects), solver-major in dataset order.
std::string write_results(const Dataset& d, InputFormat format);

/// Serializes cutoff, strata and reference data as the competition config
/// JSON.
std::string write_config(const Dataset& d);

}  // namespace rankbench

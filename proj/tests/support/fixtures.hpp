#pragma once

// Dataset builders shared by the unit and acceptance tests.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rankbench/model.hpp"

namespace rankbench::testing {

inline std::string solver_name(std::size_t i) {
    std::string s = "s";
    if (i < 10) s += "0";
    return s + std::to_string(i);
}

inline std::string instance_name(std::size_t i) {
    std::string s = "i";
    if (i < 100) s += "0";
    if (i < 10) s += "0";
    return s + std::to_string(i);
}

/// |solvers| x |instances| dataset, one seed per instance, cutoff 300 s.
/// `make(s, r)` supplies each record.
inline Dataset make_dataset(std::size_t n_solvers, std::size_t n_instances,
                            const std::function<RunRecord(std::size_t, std::size_t)>& make,
                            const std::function<std::string(std::size_t)>& stratum_of = {}) {
    Dataset d;
    d.cutoff = 300.0;
    for (std::size_t s = 0; s < n_solvers; ++s) d.solvers.push_back(solver_name(s));
    for (std::size_t r = 0; r < n_instances; ++r) {
        d.runs.push_back({instance_name(r), 0});
        d.strata[instance_name(r)] = stratum_of ? stratum_of(r) : std::string(kDefaultStratum);
    }
    for (std::size_t s = 0; s < n_solvers; ++s) {
        for (std::size_t r = 0; r < n_instances; ++r) d.results.push_back(make(s, r));
    }
    return d;
}

inline RunRecord solved(double time = 10.0) { return {RunStatus::solved, time, std::nullopt}; }
inline RunRecord failed(RunStatus status = RunStatus::timeout) { return {status, 300.0, std::nullopt}; }

/// Dataset from a 0/1 success table: table[s][r] == 1 means solved.
inline Dataset binary_dataset(const std::vector<std::vector<int>>& table) {
    return make_dataset(table.size(), table.front().size(),
                        [&](std::size_t s, std::size_t r) { return table[s][r] ? solved() : failed(); });
}

/// Synthetic data shaped like a large SAT track: `group_sizes` blocks of
/// solvers with identical results inside a block and a solved-count gap of
/// `gap` runs between consecutive blocks.
inline Dataset tiered_dataset(const std::vector<std::size_t>& group_sizes, std::size_t n_runs, std::size_t gap) {
    std::vector<std::size_t> tier_of;
    for (std::size_t g = 0; g < group_sizes.size(); ++g) tier_of.insert(tier_of.end(), group_sizes[g], g);
    const std::size_t top = n_runs - 1;
    return make_dataset(tier_of.size(), n_runs, [&](std::size_t s, std::size_t r) {
        const std::size_t solved_runs = top - tier_of[s] * gap;
        return r < solved_runs ? solved(1.0 + static_cast<double>(r % 7)) : failed();
    });
}

/// Random dataset with per-solver success probabilities, for property tests.
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n_solvers, std::size_t n_instances,
                              std::size_t n_strata = 1) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> skill(n_solvers);
    for (auto& p : skill) p = 0.2 + 0.6 * unit(rng);
    return make_dataset(
        n_solvers, n_instances,
        [&](std::size_t s, std::size_t) {
            if (unit(rng) < skill[s]) return solved(1.0 + 299.0 * unit(rng));
            return failed(unit(rng) < 0.5 ? RunStatus::timeout : RunStatus::crashed);
        },
        [&](std::size_t r) { return "stratum" + std::to_string(r % n_strata); });
}

}  // namespace rankbench::testing

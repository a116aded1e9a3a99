#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace novlex {

/// One row of the per-generation log.
struct RunRecord {
    std::size_t generation = 0;
    double behavioral_diversity = 0.0;
    double best_total_error = 0.0;
    double mean_total_error = 0.0;
    bool solution_found = false;
    std::size_t archive_size = 0;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct PopulationStats {
    double best_total_error = 0.0;
    double mean_total_error = 0.0;
    double behavioral_diversity = 0.0;
    double mean_genome_size = 0.0;

    friend bool operator==(const PopulationStats&, const PopulationStats&) = default;
};

struct RunOutcome {
    bool success = false;
    bool generalized = false;
    std::optional<std::size_t> solution_generation;

    /// Simplified solution and its size before/after simplification.
    std::optional<std::string> solution_program;
    std::size_t solution_genome_size = 0;
    std::size_t simplified_genome_size = 0;
    /// Withheld cases the simplified solution fails.
    std::size_t failed_test_cases = 0;

    PopulationStats final_population_stats;
    std::vector<RunRecord> per_generation;

    friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

} // namespace novlex

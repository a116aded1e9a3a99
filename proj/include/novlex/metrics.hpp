#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "novlex/evolution.hpp"
#include "novlex/problems.hpp"
#include "novlex/run_record.hpp"

namespace novlex {

/// Distinct behaviors (whole-vector equality) over population size.
/// Throws UsageError on an empty population.
double behavioral_diversity(std::span<const Behavior> behaviors);
double behavioral_diversity(std::span<const Individual> population);

struct SolutionStats {
    std::size_t runs = 0;
    std::size_t success_count = 0;
    std::size_t generalized_count = 0;
    /// Mean over successful runs; absent when nothing was solved.
    std::optional<double> mean_solution_generation;
    /// accumulated[g] = generalized successes with solution generation <= g.
    std::vector<std::size_t> accumulated;
};

/// `generations` sets the series length; 0 uses the longest run.
SolutionStats solution_stats(std::span<const RunOutcome> outcomes, std::size_t generations = 0);

struct SuccessCount {
    std::string strategy;
    std::size_t successes = 0;
    std::size_t runs = 0;
};

struct PairwiseTest {
    std::string first;
    std::string second;
    double statistic = 0.0;
    double p_value = 1.0;
    double p_adjusted = 1.0;
    bool significant = false;
};

struct ChiSquareReport {
    double alpha = 0.05;
    std::vector<PairwiseTest> pairs;
};

/// Pearson statistic for the 2x2 table (success/failure x group), no continuity
/// correction. A table with an empty row or column gives 0.
double chi_square_2x2(std::size_t successes_a, std::size_t runs_a, std::size_t successes_b, std::size_t runs_b);

/// Upper tail of the chi-square distribution with one degree of freedom.
double chi_square_p_value_1df(double statistic);

/// Holm step-down adjustment; output is in input order.
std::vector<double> holm_adjust(std::span<const double> p_values);

/// Every pair of strategies, Holm-corrected across the family. Throws
/// UsageError for fewer than two strategies or a strategy with zero runs.
ChiSquareReport chi_square_pairwise_holm(std::span<const SuccessCount> counts, double alpha = 0.05);

struct DiversityPoint {
    double mean = 0.0;
    std::size_t runs = 0;  // runs still going at this generation
};

/// Mean behavioral diversity per generation over the runs that reached it.
std::vector<DiversityPoint> mean_diversity_curve(std::span<const RunOutcome> outcomes);

/// Runs sharing one (problem, strategy) configuration.
struct RunGroup {
    std::string problem;
    std::string strategy;
    std::vector<RunOutcome> outcomes;
};

struct StrategySummary {
    std::string problem;
    std::string strategy;
    SolutionStats stats;
    std::vector<DiversityPoint> diversity;
};

struct ProblemTests {
    std::string problem;
    ChiSquareReport report;
};

struct ExperimentSummary {
    std::vector<StrategySummary> strategies;
    /// One report per problem with at least two strategies.
    std::vector<ProblemTests> tests;
};

/// Groups keep their given order. Tests compare generalized successes among
/// groups of the same problem.
ExperimentSummary summarize(std::span<const RunGroup> groups, double alpha = 0.05);

} // namespace novlex

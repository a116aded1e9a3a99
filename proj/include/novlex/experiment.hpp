#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "novlex/evolution.hpp"
#include "novlex/metrics.hpp"

namespace novlex {

/// Environment variable naming the default output directory.
inline constexpr const char* output_dir_env = "NOVLEX_OUT";

struct ExperimentConfig {
    std::vector<std::string> problems{"echo-smoke"};
    std::vector<std::string> strategies{"lexicase"};
    std::size_t run_count = 10;
    /// Run i uses seed seed_base + i.
    std::uint64_t seed_base = 0;

    std::size_t population_size = 200;
    std::size_t max_generations = 100;
    std::size_t tournament_size = 7;
    std::size_t novelty_tournament_size = 2;
    std::size_t k_neighbors = 25;
    OperatorRates rates;
    VariationParams variation;
    ExecutionLimits limits;
    std::size_t train_count = 0;
    std::size_t test_count = 0;
    /// Case files written by write_cases. Pinning needs both files and a single
    /// problem; the counts above are then ignored.
    std::filesystem::path train_cases;
    std::filesystem::path test_cases;
    std::size_t simplification_steps = 5000;
    bool stop_on_success = true;

    std::filesystem::path output_dir;
    /// When false, run files also record wall-clock time.
    bool deterministic = true;
    /// Runs executed concurrently.
    std::size_t parallelism = 1;

    /// Throws ConfigError for unknown ids or bad parameters and
    /// StrategyUnavailable for novelty on a problem without a behavior distance.
    void validate() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::span<const std::string_view> preset_names();
/// desk, paper-300 or paper-1000. Throws ConfigError.
ExperimentConfig preset(std::string_view name);

/// Keys accepted by apply_setting, in canonical order.
std::span<const std::string_view> setting_keys();
/// Sets one key (e.g. "population", "rates-alternation", "problem"). Lists are
/// comma separated. "preset" replaces every setting with the preset's values.
/// Throws ConfigError.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);
/// Canonical key = value text that parse_config reads back unchanged.
/// Without `execution`, "out" and "parallelism" are left out since they do not
/// change results.
std::string format_config(const ExperimentConfig& config, bool execution = true);

/// key = value lines; `[section]` prefixes later keys with "section-";
/// `#` and `;` start comments. Throws ConfigError with the line number.
void parse_config(std::istream& in, ExperimentConfig& config);
void load_config(const std::filesystem::path& path, ExperimentConfig& config);

/// $NOVLEX_OUT if set, else "runs".
std::filesystem::path default_output_dir();

/// The pinned case sets, or nothing when the config does not pin cases.
/// Throws ConfigError for unreadable or malformed files.
std::optional<CaseSets> pinned_cases(const ExperimentConfig& config);

EngineConfig engine_config(const ExperimentConfig& config, std::string_view problem, std::string_view strategy,
                           std::size_t run_index);

/// One run as stored on disk.
struct LoggedRun {
    std::string problem;
    std::string strategy;
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    RunOutcome outcome;
    std::optional<double> wall_seconds;

    friend bool operator==(const LoggedRun&, const LoggedRun&) = default;
};

std::string run_to_json(const LoggedRun& run);
/// Throws ConfigError on malformed input.
LoggedRun run_from_json(std::string_view text);
/// Per-generation CSV with a header row.
std::string run_to_csv(const LoggedRun& run);

/// Writes, under the output directory:
///   experiment.cfg                       effective configuration
///   <problem>/<strategy>/run_<i>.json    RunOutcome
///   <problem>/<strategy>/run_<i>.csv     per-generation records
///   manifest.jsonl                       one line per finished run, in run order
///   summary.csv                          per (problem, strategy) counts
/// Validation happens before anything is written. `progress`, if given,
/// receives one line per finished run.
ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream* progress = nullptr);

struct AnalysisResult {
    ExperimentSummary summary;
    std::size_t runs_found = 0;
};

/// Reads every run_<i>.json below `input`, writes the analysis CSVs into
/// `output` (default `input`/analysis) and prints tables to `report`.
/// Throws UsageError for a missing directory or one without runs.
AnalysisResult analyze_logs(const std::filesystem::path& input, std::ostream* report = nullptr,
                            std::optional<std::filesystem::path> output = std::nullopt);

std::string summary_csv(const ExperimentSummary& summary);
std::string solution_generation_csv(const ExperimentSummary& summary);
std::string accumulated_csv(const ExperimentSummary& summary);
std::string diversity_csv(const ExperimentSummary& summary);
std::string generalization_csv(const ExperimentSummary& summary);
std::string chi_square_csv(const ExperimentSummary& summary);
void print_summary(std::ostream& out, const ExperimentSummary& summary);

} // namespace novlex

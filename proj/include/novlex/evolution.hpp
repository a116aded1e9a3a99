#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "novlex/genome.hpp"
#include "novlex/problems.hpp"
#include "novlex/run_record.hpp"
#include "novlex/selection.hpp"
#include "novlex/vm.hpp"

namespace novlex {

struct Individual {
    Genome genome;
    Program program;
    Behavior behavior;
    ErrorVector errors;
    double total_error = 0.0;
    std::size_t age = 0;  // generation of birth
};

enum class Operator : std::uint8_t {
    alternation,
    uniform_mutation,
    uniform_close_mutation,
    alternation_then_mutation,
};

struct OperatorRates {
    double alternation = 0.2;
    double uniform_mutation = 0.2;
    double uniform_close_mutation = 0.1;
    double alternation_then_mutation = 0.5;

    /// Rates must be non-negative and sum to 1.
    void validate() const;
    Operator draw(Rng& rng) const;

    friend bool operator==(const OperatorRates&, const OperatorRates&) = default;
};

struct VariationParams {
    double alternation_rate = 0.01;
    double alignment_deviation = 10.0;
    double mutation_rate = 0.09;
    double close_mutation_rate = 0.1;

    friend bool operator==(const VariationParams&, const VariationParams&) = default;
};

/// Everything variation needs besides the parents.
struct VariationContext {
    VariationParams params;
    std::size_t max_genome_size = 800;
    const AtomSet* atoms = nullptr;
};

struct EngineConfig {
    std::string problem = "echo-smoke";
    std::size_t population_size = 200;
    std::size_t max_generations = 100;
    SelectionStrategy selection = SelectionStrategy::lexicase();
    OperatorRates rates;
    VariationParams variation;
    ExecutionLimits limits;
    std::uint64_t seed = 0;
    std::size_t simplification_steps = 5000;
    /// Halt at the first generation that contains a training solution.
    bool stop_on_success = true;
    /// Evaluation threads inside one run; results do not depend on it.
    std::size_t threads = 1;
    /// Overrides of the problem's default case counts (0 keeps the default).
    std::size_t train_count = 0;
    std::size_t test_count = 0;

    void validate() const;
};

std::size_t parent_count(Operator op) noexcept;

/// Throws UsageError when the number of parents does not match the operator.
Genome apply_variation(Operator op, std::span<const Genome* const> parents, const VariationContext& ctx, Rng& rng);

Genome alternation(const Genome& first, const Genome& second, const VariationParams& params, std::size_t max_size,
                   Rng& rng);
Genome uniform_mutation(const Genome& parent, const VariationParams& params, const AtomSet& atoms, Rng& rng);
Genome uniform_close_mutation(const Genome& parent, const VariationParams& params, Rng& rng);

/// Scratch-reusing evaluator for one problem and case set.
class Evaluator {
public:
    Evaluator(const ProblemSpec& spec, ExecutionLimits limits) : spec_(&spec), limits_(limits) {}

    Individual evaluate(Genome genome, std::span<const TestCase> cases, std::size_t age = 0);
    /// Behavior and errors only, for an already translated program.
    void evaluate(const Program& program, std::span<const TestCase> cases, Behavior& behavior, ErrorVector& errors);

private:
    const ProblemSpec* spec_;
    ExecutionLimits limits_;
    VmState scratch_;
};

/// Hill-climbing deletion: each step removes 1-3 random genes or silences one,
/// keeping the change only if every training error stays zero.
Individual simplify_program(const Individual& solution, const ProblemSpec& spec, std::span<const TestCase> train,
                            const ExecutionLimits& limits, Rng& rng, std::size_t steps);

/// True iff every withheld case scores zero error.
bool check_generalization(const Individual& solution, const ProblemSpec& spec, std::span<const TestCase> test,
                          const ExecutionLimits& limits);

/// Number of withheld cases with non-zero error.
std::size_t count_failures(const Individual& solution, const ProblemSpec& spec, std::span<const TestCase> test,
                           const ExecutionLimits& limits);

/// Generational engine. Every random draw comes from a stream keyed by
/// (seed, purpose, generation, index), so results are independent of `threads`.
class Engine {
public:
    explicit Engine(EngineConfig config);
    /// Uses the given cases instead of generating them.
    Engine(EngineConfig config, CaseSets cases);

    void initialize_population();
    void step_generation();
    RunOutcome run();

    const EngineConfig& config() const noexcept { return config_; }
    const ProblemSpec& problem() const noexcept { return spec_; }
    const CaseSets& cases() const noexcept { return cases_; }
    const std::vector<Individual>& population() const noexcept { return population_; }
    const Archive& archive() const noexcept { return archive_; }
    const std::vector<RunRecord>& records() const noexcept { return records_; }
    std::size_t generation() const noexcept { return generation_; }

    /// Index of the first training solution in the current population.
    std::optional<std::size_t> solution_index() const;

private:
    EngineConfig config_;
    ProblemSpec spec_;
    CaseSets cases_;
    std::vector<Individual> population_;
    Archive archive_;
    std::vector<RunRecord> records_;
    std::size_t generation_ = 0;
    std::optional<Individual> first_solution_;

    void observe();
    std::vector<Behavior> behaviors() const;
};

PopulationStats population_stats(std::span<const Individual> population);

std::string_view operator_name(Operator op) noexcept;

} // namespace novlex

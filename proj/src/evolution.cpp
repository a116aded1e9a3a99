#include "novlex/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "novlex/errors.hpp"
#include "novlex/metrics.hpp"
#include "novlex/parallel.hpp"

namespace novlex {

void OperatorRates::validate() const
{
    for (double r : {alternation, uniform_mutation, uniform_close_mutation, alternation_then_mutation}) {
        if (r < 0.0) {
            throw ConfigError("operator rates must be non-negative");
        }
    }
    double sum = alternation + uniform_mutation + uniform_close_mutation + alternation_then_mutation;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("operator rates must sum to 1");
    }
}

Operator OperatorRates::draw(Rng& rng) const
{
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if ((u -= alternation) < 0.0) return Operator::alternation;
    if ((u -= uniform_mutation) < 0.0) return Operator::uniform_mutation;
    if ((u -= uniform_close_mutation) < 0.0) return Operator::uniform_close_mutation;
    return Operator::alternation_then_mutation;
}

void EngineConfig::validate() const
{
    if (population_size == 0 || max_generations == 0) {
        throw ConfigError("population size and generation count must be positive");
    }
    selection.validate();
    rates.validate();
    limits.validate();
    if (limits.max_initial_genome_size > limits.max_genome_size) {
        throw ConfigError("max initial genome size exceeds max genome size");
    }
}

std::size_t parent_count(Operator op) noexcept
{
    return op == Operator::alternation || op == Operator::alternation_then_mutation ? 2 : 1;
}

std::string_view operator_name(Operator op) noexcept
{
    switch (op) {
    case Operator::alternation: return "alternation";
    case Operator::uniform_mutation: return "uniform-mutation";
    case Operator::uniform_close_mutation: return "uniform-close-mutation";
    case Operator::alternation_then_mutation: return "alternation-then-uniform-mutation";
    }
    return "?";
}

// ---- variation --------------------------------------------------------------------

Genome alternation(const Genome& first, const Genome& second, const VariationParams& params, std::size_t max_size,
                   Rng& rng)
{
    const Genome* parents[2] = {&first, &second};
    std::normal_distribution<double> shift(0.0, params.alignment_deviation);
    std::bernoulli_distribution switch_parent(std::clamp(params.alternation_rate, 0.0, 1.0));
    Genome child;
    std::size_t source = 0;
    std::int64_t i = 0;
    // Bounds the walk when switches keep landing out of range.
    std::size_t budget = 2 * (first.size() + second.size()) + max_size + 16;
    while (budget-- > 0 && child.size() < max_size && static_cast<std::size_t>(i) < parents[source]->size()) {
        if (switch_parent(rng)) {
            i = std::max<std::int64_t>(0, i + std::llround(shift(rng)));
            source = 1 - source;
        } else {
            child.push_back((*parents[source])[static_cast<std::size_t>(i)]);
            ++i;
        }
    }
    return child;
}

namespace {

void tweak(Value& v, Rng& rng)
{
    std::normal_distribution<double> noise(0.0, 1.0);
    std::visit(
        [&]<class T>(T& x) {
            if constexpr (std::is_same_v<T, std::int64_t>) {
                x = clamp_int(x + std::llround(noise(rng)));
            } else if constexpr (std::is_same_v<T, double>) {
                x = clamp_float(x + noise(rng));
            } else if constexpr (std::is_same_v<T, bool>) {
                x = !x;
            } else if constexpr (std::is_same_v<T, std::string>) {
                char c = static_cast<char>(std::uniform_int_distribution<int>(32, 126)(rng));
                if (x.empty()) {
                    x.push_back(c);
                } else {
                    x[uniform_index(rng, x.size())] = c;
                }
            } else if constexpr (std::is_same_v<T, IntVector>) {
                if (!x.empty()) {
                    auto& e = x[uniform_index(rng, x.size())];
                    e = clamp_int(e + std::llround(noise(rng)));
                }
            } else if constexpr (std::is_same_v<T, FloatVector>) {
                if (!x.empty()) {
                    auto& e = x[uniform_index(rng, x.size())];
                    e = clamp_float(e + noise(rng));
                }
            }
        },
        v);
}

} // namespace

Genome uniform_mutation(const Genome& parent, const VariationParams& params, const AtomSet& atoms, Rng& rng)
{
    Genome child = parent;
    for (auto& gene : child) {
        if (!coin(rng, params.mutation_rate)) {
            continue;
        }
        if (!gene.is_instruction() && coin(rng, 0.5)) {
            tweak(std::get<Value>(gene.payload), rng);
        } else {
            gene.payload = random_gene(atoms, rng).payload;
        }
    }
    return child;
}

Genome uniform_close_mutation(const Genome& parent, const VariationParams& params, Rng& rng)
{
    Genome child = parent;
    for (auto& gene : child) {
        if (coin(rng, params.close_mutation_rate)) {
            if (coin(rng, 0.5)) {
                ++gene.close_count;
            } else if (gene.close_count > 0) {
                --gene.close_count;
            }
        }
    }
    return child;
}

Genome apply_variation(Operator op, std::span<const Genome* const> parents, const VariationContext& ctx, Rng& rng)
{
    if (parents.size() != parent_count(op)) {
        throw UsageError(std::string(operator_name(op)) + " takes " + std::to_string(parent_count(op)) +
                         " parent(s), got " + std::to_string(parents.size()));
    }
    if ((op == Operator::uniform_mutation || op == Operator::alternation_then_mutation) && ctx.atoms == nullptr) {
        throw UsageError("mutation needs an atom set");
    }
    switch (op) {
    case Operator::alternation:
        return alternation(*parents[0], *parents[1], ctx.params, ctx.max_genome_size, rng);
    case Operator::uniform_mutation: return uniform_mutation(*parents[0], ctx.params, *ctx.atoms, rng);
    case Operator::uniform_close_mutation: return uniform_close_mutation(*parents[0], ctx.params, rng);
    case Operator::alternation_then_mutation: {
        auto child = alternation(*parents[0], *parents[1], ctx.params, ctx.max_genome_size, rng);
        return uniform_mutation(child, ctx.params, *ctx.atoms, rng);
    }
    }
    return {};
}

// ---- evaluation -------------------------------------------------------------------

void Evaluator::evaluate(const Program& program, std::span<const TestCase> cases, Behavior& behavior,
                         ErrorVector& errors)
{
    behavior.clear();
    errors.clear();
    behavior.reserve(cases.size());
    errors.reserve(cases.size());
    for (const auto& c : cases) {
        execute(program, c.inputs, limits_, scratch_);
        behavior.push_back(case_output(*spec_, scratch_));
        errors.push_back(case_error(*spec_, behavior.back(), c));
    }
}

Individual Evaluator::evaluate(Genome genome, std::span<const TestCase> cases, std::size_t age)
{
    Individual ind;
    ind.genome = std::move(genome);
    ind.program = translate_genome(ind.genome);
    evaluate(ind.program, cases, ind.behavior, ind.errors);
    ind.total_error = std::accumulate(ind.errors.begin(), ind.errors.end(), 0.0);
    ind.age = age;
    return ind;
}

namespace {

bool all_zero(const ErrorVector& errors)
{
    return std::all_of(errors.begin(), errors.end(), [](double e) { return e == 0.0; });
}

} // namespace

Individual simplify_program(const Individual& solution, const ProblemSpec& spec, std::span<const TestCase> train,
                            const ExecutionLimits& limits, Rng& rng, std::size_t steps)
{
    static const InstructionRef noop = InstructionRegistry::builtin().require("exec_noop");
    Evaluator evaluator(spec, limits);
    Genome best = solution.genome;
    Behavior behavior;
    ErrorVector errors;
    for (std::size_t step = 0; step < steps && !best.empty(); ++step) {
        Genome candidate = best;
        if (coin(rng, 0.8)) {
            auto removals = std::min<std::size_t>(std::uniform_int_distribution<std::size_t>(1, 3)(rng), candidate.size());
            for (std::size_t r = 0; r < removals; ++r) {
                candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, candidate.size())));
            }
        } else {
            auto& gene = candidate[uniform_index(rng, candidate.size())];
            if (gene.is_instruction() && std::get<InstructionRef>(gene.payload) == noop) {
                continue;
            }
            gene.payload = noop;
        }
        evaluator.evaluate(translate_genome(candidate), train, behavior, errors);
        if (all_zero(errors)) {
            best = std::move(candidate);
        }
    }
    Individual out = evaluator.evaluate(std::move(best), train, solution.age);
    if (!all_zero(out.errors)) {
        throw std::logic_error("simplification accepted a genome that fails training");
    }
    return out;
}

std::size_t count_failures(const Individual& solution, const ProblemSpec& spec, std::span<const TestCase> test,
                           const ExecutionLimits& limits)
{
    Evaluator evaluator(spec, limits);
    Behavior behavior;
    ErrorVector errors;
    evaluator.evaluate(solution.program, test, behavior, errors);
    return static_cast<std::size_t>(std::count_if(errors.begin(), errors.end(), [](double e) { return e != 0.0; }));
}

bool check_generalization(const Individual& solution, const ProblemSpec& spec, std::span<const TestCase> test,
                          const ExecutionLimits& limits)
{
    return count_failures(solution, spec, test, limits) == 0;
}

PopulationStats population_stats(std::span<const Individual> population)
{
    PopulationStats s;
    if (population.empty()) {
        return s;
    }
    s.best_total_error = population.front().total_error;
    double total = 0.0;
    double genes = 0.0;
    std::vector<Behavior> behaviors;
    behaviors.reserve(population.size());
    for (const auto& ind : population) {
        s.best_total_error = std::min(s.best_total_error, ind.total_error);
        total += ind.total_error;
        genes += static_cast<double>(ind.genome.size());
        behaviors.push_back(ind.behavior);
    }
    s.mean_total_error = total / static_cast<double>(population.size());
    s.mean_genome_size = genes / static_cast<double>(population.size());
    s.behavioral_diversity = behavioral_diversity(behaviors);
    return s;
}

// ---- engine -----------------------------------------------------------------------

namespace {

ProblemSpec configured_problem(const EngineConfig& config)
{
    config.validate();
    ProblemSpec spec = build_problem(config.problem);
    if (config.train_count > 0) {
        spec.train_count = config.train_count;
    }
    if (config.test_count > 0) {
        spec.test_count = config.test_count;
    }
    if (config.selection.kind == SelectionKind::novelty && spec.distance == DistanceKind::unsupported) {
        throw StrategyUnavailable("novelty search is not available for " + spec.name +
                                  ": its outputs have no behavior distance");
    }
    return spec;
}

CaseSets generated_cases(const EngineConfig& config, const ProblemSpec& spec)
{
    auto rng = derive_stream({config.seed, stream::cases});
    return generate_cases(spec, rng);
}

} // namespace

Engine::Engine(EngineConfig config) : config_(std::move(config)), spec_(configured_problem(config_))
{
    cases_ = generated_cases(config_, spec_);
}

Engine::Engine(EngineConfig config, CaseSets cases)
    : config_(std::move(config)), spec_(configured_problem(config_)), cases_(std::move(cases))
{
    if (cases_.train.empty() || cases_.test.empty()) {
        throw ConfigError("case sets must be non-empty");
    }
}

std::vector<Behavior> Engine::behaviors() const
{
    std::vector<Behavior> out;
    out.reserve(population_.size());
    for (const auto& ind : population_) {
        out.push_back(ind.behavior);
    }
    return out;
}

void Engine::initialize_population()
{
    population_.assign(config_.population_size, Individual{});
    archive_.members.clear();
    records_.clear();
    generation_ = 0;
    first_solution_.reset();
    std::vector<Evaluator> evaluators(std::max<std::size_t>(config_.threads, 1), Evaluator(spec_, config_.limits));
    parallel_for(config_.population_size, config_.threads, [&](std::size_t worker, std::size_t i) {
        auto rng = derive_stream({config_.seed, stream::init, i});
        auto genome = random_genome(rng, config_.limits, spec_.atoms);
        population_[i] = evaluators[worker].evaluate(std::move(genome), cases_.train, 0);
    });
    observe();
}

void Engine::observe()
{
    auto stats = population_stats(population_);
    RunRecord r;
    r.generation = generation_;
    r.behavioral_diversity = stats.behavioral_diversity;
    r.best_total_error = stats.best_total_error;
    r.mean_total_error = stats.mean_total_error;
    auto found = solution_index();
    r.solution_found = found.has_value();
    if (found && !first_solution_) {
        first_solution_ = population_[*found];
    }
    r.archive_size = archive_.members.size();
    records_.push_back(r);
}

std::optional<std::size_t> Engine::solution_index() const
{
    for (std::size_t i = 0; i < population_.size(); ++i) {
        if (population_[i].total_error == 0.0 && all_zero(population_[i].errors)) {
            return i;
        }
    }
    return std::nullopt;
}

void Engine::step_generation()
{
    if (population_.empty()) {
        throw UsageError("step_generation before initialize_population");
    }
    const std::size_t n = population_.size();
    const std::size_t cases = cases_.train.size();

    // Frozen selection inputs for this generation.
    std::vector<double> totals(n);
    ScoreMatrix errors(n, cases);
    for (std::size_t i = 0; i < n; ++i) {
        totals[i] = population_[i].total_error;
        std::copy(population_[i].errors.begin(), population_[i].errors.end(), errors.row(i).begin());
    }
    std::vector<Behavior> behaviors;
    std::vector<double> novelties;
    NoveltyScores counts;
    const auto& strategy = config_.selection;
    if (strategy.uses_archive()) {
        behaviors = this->behaviors();
        if (strategy.kind == SelectionKind::novelty) {
            novelties = knn_novelties(behaviors, archive_.members, strategy.k_neighbors, spec_.distance);
        } else {
            counts = case_novelty_scores(behaviors, archive_.members);
        }
    }

    auto select = [&](Rng& rng) -> std::size_t {
        switch (strategy.kind) {
        case SelectionKind::tournament: return tournament_select(totals, strategy.tournament_size, rng);
        case SelectionKind::lexicase: return lexicase_select(errors, rng);
        case SelectionKind::novelty: return novelty_search_select(novelties, strategy.tournament_size, rng);
        case SelectionKind::novelty_lexicase: return novelty_lexicase_select(errors, counts, rng);
        }
        return 0;
    };

    const VariationContext ctx{config_.variation, config_.limits.max_genome_size, &spec_.atoms};
    const std::size_t next_generation = generation_ + 1;
    std::vector<Individual> children(n);
    std::vector<Evaluator> evaluators(std::max<std::size_t>(config_.threads, 1), Evaluator(spec_, config_.limits));
    parallel_for(n, config_.threads, [&](std::size_t worker, std::size_t c) {
        auto rng = derive_stream({config_.seed, stream::child, generation_, c});
        Operator op = config_.rates.draw(rng);
        const Genome* parents[2] = {nullptr, nullptr};
        for (std::size_t p = 0; p < parent_count(op); ++p) {
            parents[p] = &population_[select(rng)].genome;
        }
        auto genome = apply_variation(op, std::span<const Genome* const>(parents, parent_count(op)), ctx, rng);
        children[c] = evaluators[worker].evaluate(std::move(genome), cases_.train, next_generation);
    });

    if (strategy.uses_archive()) {
        auto rng = derive_stream({config_.seed, stream::archive, generation_});
        archive_update(archive_, behaviors, rng);
    }
    population_ = std::move(children);
    generation_ = next_generation;
    observe();
}

RunOutcome Engine::run()
{
    initialize_population();
    while (true) {
        if (config_.stop_on_success && solution_index()) {
            break;
        }
        if (generation_ + 1 >= config_.max_generations) {
            break;
        }
        step_generation();
    }

    RunOutcome outcome;
    outcome.per_generation = records_;
    outcome.final_population_stats = population_stats(population_);
    for (const auto& r : records_) {
        if (r.solution_found) {
            outcome.success = true;
            outcome.solution_generation = r.generation;
            break;
        }
    }
    if (first_solution_) {
        const Individual& solution = *first_solution_;
        auto rng = derive_stream({config_.seed, stream::simplify});
        Individual simple =
            simplify_program(solution, spec_, cases_.train, config_.limits, rng, config_.simplification_steps);
        outcome.solution_genome_size = solution.genome.size();
        outcome.simplified_genome_size = simple.genome.size();
        outcome.solution_program = to_text(simple.program);
        outcome.failed_test_cases = count_failures(simple, spec_, cases_.test, config_.limits);
        outcome.generalized = outcome.failed_test_cases == 0;
    }
    return outcome;
}

} // namespace novlex

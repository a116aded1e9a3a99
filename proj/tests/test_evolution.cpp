#include <doctest.h>

#include <numeric>

#include "novlex/errors.hpp"
#include "novlex/evolution.hpp"

using namespace novlex;

namespace {

Genome genome_from(std::string_view text)
{
    return genome_of(parse_program(text));
}

EngineConfig small(std::string problem, SelectionStrategy selection, std::uint64_t seed)
{
    EngineConfig c;
    c.problem = std::move(problem);
    c.population_size = 40;
    c.max_generations = 5;
    c.selection = selection;
    c.seed = seed;
    c.simplification_steps = 200;
    return c;
}

Individual solution_for(const ProblemSpec& spec, const CaseSets& cases, std::string_view text)
{
    Evaluator eval(spec, ExecutionLimits{});
    return eval.evaluate(genome_from(text), cases.train);
}

} // namespace

TEST_SUITE("evolution")
{
    TEST_CASE("operator rates")
    {
        OperatorRates rates;
        CHECK_NOTHROW(rates.validate());
        OperatorRates bad;
        bad.alternation = 0.5;
        CHECK_THROWS_AS(bad.validate(), ConfigError);
        OperatorRates negative{-0.1, 0.3, 0.3, 0.5};
        CHECK_THROWS_AS(negative.validate(), ConfigError);

        Rng rng = derive_stream({30});
        std::vector<double> f(4, 0.0);
        for (int i = 0; i < 100000; ++i) {
            f[static_cast<std::size_t>(rates.draw(rng))] += 1.0 / 100000;
        }
        CHECK(f[0] == doctest::Approx(0.2).epsilon(0.05));
        CHECK(f[1] == doctest::Approx(0.2).epsilon(0.05));
        CHECK(f[2] == doctest::Approx(0.1).epsilon(0.05));
        CHECK(f[3] == doctest::Approx(0.5).epsilon(0.05));
    }

    TEST_CASE("variation operators")
    {
        auto spec = build_problem("mirror-image");
        Rng rng = derive_stream({31});
        ExecutionLimits limits;
        auto a = random_genome(rng, limits, spec.atoms);
        auto b = random_genome(rng, limits, spec.atoms);

        VariationParams frozen;
        frozen.alternation_rate = 0.0;
        frozen.mutation_rate = 0.0;
        frozen.close_mutation_rate = 0.0;
        CHECK(alternation(a, b, frozen, 800, rng) == a);
        CHECK(uniform_mutation(a, frozen, spec.atoms, rng) == a);
        CHECK(uniform_close_mutation(a, frozen, rng) == a);

        VariationParams always = frozen;
        always.close_mutation_rate = 1.0;
        Genome zeros = a;
        for (auto& g : zeros) {
            g.close_count = 0;
        }
        auto closed = uniform_close_mutation(zeros, always, rng);
        REQUIRE(closed.size() == zeros.size());
        for (std::size_t i = 0; i < closed.size(); ++i) {
            CHECK(closed[i].close_count <= 1);
            CHECK(closed[i].payload == zeros[i].payload);
        }

        VariationParams busy;
        busy.alternation_rate = 0.3;
        for (int i = 0; i < 200; ++i) {
            auto child = alternation(a, b, busy, 30, rng);
            CHECK(child.size() <= 30);
        }
        auto mutated = uniform_mutation(a, VariationParams{}, spec.atoms, rng);
        CHECK(mutated.size() == a.size());
    }

    TEST_CASE("variation arity")
    {
        auto spec = build_problem("echo-smoke");
        Rng rng = derive_stream({32});
        auto g = genome_from("(in1)");
        const Genome* one[1] = {&g};
        const Genome* two[2] = {&g, &g};
        VariationContext ctx{VariationParams{}, 800, &spec.atoms};
        CHECK(parent_count(Operator::alternation) == 2);
        CHECK(parent_count(Operator::alternation_then_mutation) == 2);
        CHECK(parent_count(Operator::uniform_mutation) == 1);
        CHECK(parent_count(Operator::uniform_close_mutation) == 1);
        CHECK_THROWS_AS(apply_variation(Operator::alternation, one, ctx, rng), UsageError);
        CHECK_THROWS_AS(apply_variation(Operator::uniform_mutation, two, ctx, rng), UsageError);
        CHECK_NOTHROW(apply_variation(Operator::alternation_then_mutation, two, ctx, rng));
    }

    TEST_CASE("initial population")
    {
        Engine a(small("rswn", SelectionStrategy::lexicase(), 3));
        Engine b(small("rswn", SelectionStrategy::lexicase(), 3));
        a.initialize_population();
        b.initialize_population();
        REQUIRE(a.population().size() == 40);
        for (std::size_t i = 0; i < 40; ++i) {
            const auto& ind = a.population()[i];
            CHECK(ind.genome == b.population()[i].genome);
            CHECK(ind.program == translate_genome(ind.genome));
            CHECK(ind.errors.size() == a.cases().train.size());
            CHECK(ind.behavior.size() == a.cases().train.size());
            CHECK(ind.total_error == doctest::Approx(std::accumulate(ind.errors.begin(), ind.errors.end(), 0.0)));
        }
    }

    TEST_CASE("generations keep size, grow the archive and re-evaluate identically")
    {
        for (auto s : {SelectionStrategy::novelty_lexicase(), SelectionStrategy::novelty(),
                       SelectionStrategy::tournament(), SelectionStrategy::lexicase()}) {
            Engine e(small("mirror-image", s, 4));
            e.initialize_population();
            for (std::size_t g = 1; g <= 3; ++g) {
                e.step_generation();
                CHECK(e.generation() == g);
                CHECK(e.population().size() == 40);
                CHECK(e.archive().members.size() == (s.uses_archive() ? g : 0));
            }
            Evaluator eval(e.problem(), e.config().limits);
            for (const auto& ind : e.population()) {
                auto again = eval.evaluate(ind.genome, e.cases().train, ind.age);
                CHECK(again.behavior == ind.behavior);
                CHECK(again.errors == ind.errors);
                CHECK(ind.age == 3);
            }
        }
    }

    TEST_CASE("runs do not depend on evaluation threads")
    {
        auto one = small("rswn", SelectionStrategy::novelty_lexicase(), 5);
        auto four = one;
        four.threads = 4;
        CHECK(Engine(one).run() == Engine(four).run());
        CHECK(Engine(one).run() == Engine(one).run());
    }

    TEST_CASE("run outcomes")
    {
        auto cfg = small("echo-smoke", SelectionStrategy::lexicase(), 6);
        Engine e(cfg);
        auto out = e.run();
        REQUIRE(out.success);
        REQUIRE(out.solution_generation);
        CHECK(out.per_generation.size() == *out.solution_generation + 1);
        CHECK(out.per_generation.back().solution_found);
        for (std::size_t g = 0; g + 1 < out.per_generation.size(); ++g) {
            CHECK_FALSE(out.per_generation[g].solution_found);
        }
        auto idx = e.solution_index();
        REQUIRE(idx);
        for (double x : e.population()[*idx].errors) {
            CHECK(x == 0.0);
        }
        CHECK(out.simplified_genome_size <= out.solution_genome_size);
        CHECK(out.solution_program);

        auto hard = small("x-word-lines", SelectionStrategy::tournament(), 7);
        hard.max_generations = 2;
        auto miss = Engine(hard).run();
        CHECK_FALSE(miss.success);
        CHECK_FALSE(miss.generalized);
        CHECK_FALSE(miss.solution_generation);
        CHECK(miss.per_generation.size() == 2);
    }

    TEST_CASE("pinned cases are used as given")
    {
        auto cfg = small("echo-smoke", SelectionStrategy::lexicase(), 8);
        CaseSets cases{{{{std::int64_t{1}}, {std::int64_t{1}}}}, {{{std::int64_t{2}}, {std::int64_t{2}}}}};
        Engine e(cfg, cases);
        CHECK(e.cases().train == cases.train);
        CHECK_THROWS_AS(Engine(cfg, CaseSets{}), ConfigError);
    }

    TEST_CASE("simplification shrinks padded solutions and keeps them correct")
    {
        auto spec = build_problem("mirror-image");
        Rng case_rng = derive_stream({33});
        auto cases = generate_cases(spec, case_rng);
        ExecutionLimits limits;
        std::size_t shorter = 0;
        const std::size_t seeds = 100;
        for (std::uint64_t seed = 0; seed < seeds; ++seed) {
            auto solution = solution_for(spec, cases,
                                         "(exec_noop in1 exec_noop exec_noop vector_integer_reverse exec_noop exec_noop "
                                         "in2 exec_noop exec_noop exec_noop vector_integer_eq exec_noop exec_noop)");
            REQUIRE(solution.total_error == 0.0);
            Rng rng = derive_stream({seed});
            auto simple = simplify_program(solution, spec, cases.train, limits, rng, 5000);
            CHECK(simple.genome.size() <= solution.genome.size());
            CHECK(simple.total_error == 0.0);
            shorter += simple.genome.size() < solution.genome.size() ? 1 : 0;
        }
        CHECK(shorter >= 99);
    }

    TEST_CASE("generalization checks")
    {
        auto csl = build_problem("csl");
        Rng rng = derive_stream({34});
        auto cases = generate_cases(csl, rng);
        ExecutionLimits limits;
        auto reference = solution_for(csl, cases,
                                      "(in1 string_length in2 string_length integer_lt in2 string_length in3 "
                                      "string_length integer_lt boolean_and)");
        CHECK(check_generalization(reference, csl, cases.test, limits));
        CHECK(count_failures(reference, csl, cases.test, limits) == 0);

        bool has_true = false, has_false = false;
        for (const auto& c : cases.test) {
            (std::get<bool>(c.expected[0]) ? has_true : has_false) = true;
        }
        REQUIRE((has_true && has_false));
        CHECK_FALSE(check_generalization(solution_for(csl, cases, "(true)"), csl, cases.test, limits));
        CHECK_FALSE(check_generalization(solution_for(csl, cases, "(false)"), csl, cases.test, limits));

        // Passes the training cases but not the withheld ones.
        auto mirror = build_problem("mirror-image");
        CaseSets few{{{{IntVector{1}, IntVector{1}}, {true}}}, {{{IntVector{1, 2}, IntVector{1, 2}}, {false}}}};
        auto memorizer = solution_for(mirror, few, "(true)");
        CHECK(memorizer.total_error == 0.0);
        CHECK_FALSE(check_generalization(memorizer, mirror, few.test, limits));
    }

    TEST_CASE("engine configuration errors")
    {
        auto cfg = small("echo-smoke", SelectionStrategy::lexicase(), 1);
        cfg.population_size = 0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        auto unknown = small("nope", SelectionStrategy::lexicase(), 1);
        CHECK_THROWS(Engine{unknown});
    }
}

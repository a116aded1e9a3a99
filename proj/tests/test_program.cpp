#include <doctest.h>

#include <stdexcept>

#include "novlex/genome.hpp"
#include "novlex/problems.hpp"
#include "novlex/program.hpp"

using namespace novlex;

namespace {

Gene lit(Value v, std::uint32_t close = 0)
{
    return Gene{std::move(v), close};
}

Gene ins(std::string_view name, std::uint32_t close = 0)
{
    return Gene{InstructionRegistry::builtin().require(name), close};
}

} // namespace

TEST_SUITE("program")
{
    TEST_CASE("translation examples")
    {
        CHECK(translate_genome({}).body.empty());
        CHECK(to_text(translate_genome({})) == "()");

        Genome flat{lit(std::int64_t{5}), lit(std::int64_t{7}), ins("integer_add")};
        CHECK(to_text(translate_genome(flat)) == "(5 7 integer_add)");

        Genome branch{ins("exec_if"), lit(std::int64_t{1}, 1), lit(std::int64_t{2}, 1)};
        auto p = translate_genome(branch);
        CHECK(to_text(p) == "(exec_if (1) (2))");
        CHECK(p.size() == 5);
    }

    TEST_CASE("unclosed blocks close at the end and surplus closes are ignored")
    {
        Genome open{ins("exec_do_times"), lit(std::int64_t{1}), lit(std::int64_t{2})};
        CHECK(to_text(translate_genome(open)) == "(exec_do_times (1 2))");

        Genome surplus{lit(std::int64_t{1}, 3), ins("exec_when"), lit(true, 2), lit(std::int64_t{3})};
        CHECK(to_text(translate_genome(surplus)) == "(1 exec_when (true) 3)");

        Genome nested{ins("exec_when"), ins("exec_if"), lit(std::int64_t{1}, 1), lit(std::int64_t{2}, 2),
                      lit(std::int64_t{3})};
        CHECK(to_text(translate_genome(nested)) == "(exec_when (exec_if (1) (2)) 3)");

        Genome empty_blocks{ins("exec_if", 2)};
        CHECK(to_text(translate_genome(empty_blocks)) == "(exec_if () ())");
    }

    TEST_CASE("text form round trips literals of every type")
    {
        for (auto text : {"(1 -2 2.5 true false \"a \\\"q\\\" \\n\" [1 -2] [] #f[1.5 -0.25] #f[])",
                          "(exec_if (in1 (integer_add)) ())", "()"}) {
            auto p = parse_program(text);
            CHECK(to_text(p) == text);
            CHECK(parse_program(to_text(p)) == p);
        }
    }

    TEST_CASE("malformed text is rejected")
    {
        CHECK_THROWS_AS(parse_program("(1 2"), std::invalid_argument);
        CHECK_THROWS_AS(parse_program("(no_such_instruction)"), std::invalid_argument);
        CHECK_THROWS_AS(parse_program("(\"open)"), std::invalid_argument);
        CHECK_THROWS_AS(parse_program("(1))"), std::invalid_argument);
    }

    TEST_CASE("genome_of inverts translation")
    {
        auto p = parse_program("(in1 exec_if (1 exec_when (true) 2) (3) 4 exec_do_count ())");
        CHECK(translate_genome(genome_of(p)) == p);
        CHECK_THROWS_AS(genome_of(parse_program("(1 (2))")), std::invalid_argument);
    }

    TEST_CASE("translation is total and round trips on random genomes")
    {
        Rng rng = derive_stream({7});
        ExecutionLimits limits;
        for (auto name : problem_names()) {
            auto spec = build_problem(name);
            for (int i = 0; i < 300; ++i) {
                auto genome = random_genome(rng, limits, spec.atoms);
                Program p;
                CHECK_NOTHROW(p = translate_genome(genome));
                CHECK(parse_program(to_text(p)) == p);
                CHECK(translate_genome(genome_of(p)) == p);
            }
        }
    }

    TEST_CASE("arbitrary close counts never break translation")
    {
        Rng rng = derive_stream({8});
        const auto& reg = InstructionRegistry::builtin();
        for (int i = 0; i < 2000; ++i) {
            Genome g;
            auto len = uniform_index(rng, 40);
            for (std::size_t k = 0; k < len; ++k) {
                auto close = static_cast<std::uint32_t>(uniform_index(rng, 6));
                if (coin(rng, 0.5)) {
                    g.push_back(Gene{InstructionRef{static_cast<std::uint16_t>(uniform_index(rng, reg.size()))}, close});
                } else {
                    g.push_back(lit(static_cast<std::int64_t>(k), close));
                }
            }
            CHECK_NOTHROW(translate_genome(g));
        }
    }
}

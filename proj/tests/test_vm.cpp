#include <doctest.h>

#include <cmath>

#include "novlex/genome.hpp"
#include "novlex/problems.hpp"
#include "novlex/program.hpp"
#include "novlex/vm.hpp"

using namespace novlex;

namespace {

VmState run(std::string_view text, std::vector<Value> inputs = {}, ExecutionLimits limits = {})
{
    return execute(parse_program(text), inputs, limits);
}

std::int64_t top_int(const VmState& s)
{
    REQUIRE_FALSE(s.integer.empty());
    return s.integer.back();
}

} // namespace

TEST_SUITE("vm")
{
    TEST_CASE("empty program leaves every stack empty")
    {
        auto s = run("()");
        CHECK(s.exec.empty());
        CHECK(s.integer.empty());
        CHECK(s.floating.empty());
        CHECK(s.boolean.empty());
        CHECK(s.string.empty());
        CHECK(s.vector_integer.empty());
        CHECK(s.vector_float.empty());
        CHECK(s.print_buffer.empty());
    }

    TEST_CASE("arithmetic and inputs")
    {
        CHECK(top_int(run("(2 3 integer_add)")) == 5);
        CHECK(top_int(run("(in1 in1 integer_mult)", {std::int64_t{7}})) == 49);
        CHECK(top_int(run("(7 2 integer_sub)")) == 5);
        CHECK(top_int(run("(-7 2 integer_mod)")) == 1);
        CHECK(top_int(run("(-7 2 integer_div)")) == -3);
    }

    TEST_CASE("missing arguments are no-ops")
    {
        auto s = run("(integer_add 4 integer_div boolean_and string_concat vector_integer_first exec_if)");
        CHECK(s.integer == std::vector<std::int64_t>{4});
        CHECK(s.boolean.empty());

        auto z = run("(5 0 integer_div)");
        CHECK(z.integer == std::vector<std::int64_t>{5, 0});
        auto f = run("(1.5 0.0 float_div)");
        CHECK(f.floating.size() == 2);
    }

    TEST_CASE("results saturate at the magnitude bound")
    {
        auto s = run("(1000000000000 1000000000000 integer_mult)");
        CHECK(top_int(s) == static_cast<std::int64_t>(max_number_magnitude));
        auto f = run("(1000000000000.0 1000000000000.0 float_mult)");
        REQUIRE(f.floating.size() == 1);
        CHECK(f.floating.back() == max_number_magnitude);
    }

    TEST_CASE("exec_if picks one branch")
    {
        CHECK(run("(true exec_if (1) (2))").integer == std::vector<std::int64_t>{1});
        CHECK(run("(false exec_if (1) (2))").integer == std::vector<std::int64_t>{2});
        // Without a boolean nothing is skipped.
        CHECK(run("(exec_if (1) (2))").integer == std::vector<std::int64_t>{1, 2});
    }

    TEST_CASE("exec_when skips on false")
    {
        CHECK(run("(false exec_when (1) 2)").integer == std::vector<std::int64_t>{2});
        CHECK(run("(true exec_when (1) 2)").integer == std::vector<std::int64_t>{1, 2});
    }

    TEST_CASE("loops")
    {
        CHECK(run("(0 3 exec_do_range ())").integer == std::vector<std::int64_t>{0, 1, 2, 3});
        CHECK(run("(3 0 exec_do_range ())").integer == std::vector<std::int64_t>{3, 2, 1, 0});
        CHECK(run("(4 exec_do_count ())").integer == std::vector<std::int64_t>{0, 1, 2, 3});
        CHECK(run("(0 4 exec_do_times (integer_inc))").integer == std::vector<std::int64_t>{4});
        CHECK(run("(0 exec_do_count (99))").integer.empty());
        CHECK(run("(-2 exec_do_times (99))").integer.empty());

        // Count down from 3 with exec_while.
        auto s = run("(3 true exec_while (integer_dec integer_dup 0 integer_gt))");
        CHECK(s.integer == std::vector<std::int64_t>{0});
    }

    TEST_CASE("iteration over strings and vectors")
    {
        auto s = run("(\"abc\" string_iterate (print_string print_newline))");
        CHECK(s.print_buffer == "a\nb\nc\n");
        auto v = run("(0 [4 5 6] vector_integer_iterate (integer_add))");
        CHECK(top_int(v) == 15);
        auto e = run("(\"\" string_iterate (1))");
        CHECK(e.integer.empty());
    }

    TEST_CASE("exec stack manipulation sees program order")
    {
        CHECK(run("(exec_dup (1 integer_inc))").integer == std::vector<std::int64_t>{2, 2});
        CHECK(run("(exec_pop 1 2)").integer == std::vector<std::int64_t>{2});
        CHECK(run("(exec_swap 1 2 3)").integer == std::vector<std::int64_t>{2, 1, 3});
        CHECK(run("(exec_swap (1) (2))").integer == std::vector<std::int64_t>{2, 1});
    }

    TEST_CASE("strings and vectors")
    {
        auto s = run("(\"a b\" \" \" \"\\n\" string_replace print_string)");
        CHECK(s.print_buffer == "a\nb");
        auto split = run("(\"  one two \" string_split)");
        CHECK(split.string == std::vector<std::string>{"two", "one"});
        auto rev = run("([1 2 3] vector_integer_reverse)");
        CHECK(rev.vector_integer.back() == IntVector{3, 2, 1});
        auto idx = run("([5 0 7 0] 0 vector_integer_index_of)");
        CHECK(top_int(idx) == 1);
        auto nth = run("([5 6 7] -1 vector_integer_nth)");
        CHECK(top_int(nth) == 7);
        auto set = run("([5 6 7] 1 9 vector_integer_set)");
        CHECK(set.vector_integer.back() == IntVector{5, 9, 7});
        auto f = run("(#f[1.0 2.5] vector_float_last)");
        CHECK(f.floating.back() == 2.5);
    }

    TEST_CASE("step limit bounds runaway programs")
    {
        ExecutionLimits limits;
        limits.step_limit = 50;
        auto s = run("(true exec_while (true))", {}, limits);
        CHECK(s.steps_used <= 50);
        auto d = run("(1000000 exec_do_times (1))", {}, limits);
        CHECK(d.steps_used <= 50);
    }

    TEST_CASE("fuzzed genomes execute within limits, deterministically")
    {
        ExecutionLimits limits;
        Rng rng = derive_stream({42});
        std::size_t checked = 0;
        for (auto name : problem_names()) {
            auto spec = build_problem(name);
            for (int i = 0; i < 1000; ++i) {
                auto genome = random_genome(rng, limits, spec.atoms);
                auto program = translate_genome(genome);
                auto inputs = spec.random_input(rng);
                VmState a = execute(program, inputs, limits);
                VmState b = execute(program, inputs, limits);
                CHECK(a.steps_used <= limits.step_limit);
                CHECK(a.integer == b.integer);
                CHECK(a.string == b.string);
                CHECK(a.print_buffer == b.print_buffer);
                CHECK(a.boolean == b.boolean);
                for (double x : a.floating) {
                    CHECK(std::abs(x) <= max_number_magnitude);
                }
                for (auto x : a.integer) {
                    CHECK(std::abs(static_cast<double>(x)) <= max_number_magnitude);
                }
                ++checked;
            }
        }
        CHECK(checked >= 10000);
    }

    TEST_CASE("state reuse gives the same result as a fresh state")
    {
        auto program = parse_program("(in1 string_iterate (print_string 1) integer_add)");
        ExecutionLimits limits;
        VmState scratch;
        execute(parse_program("(5 6 7 \"junk\")"), {}, limits, scratch);
        std::vector<Value> in{std::string("xyz")};
        execute(program, in, limits, scratch);
        auto fresh = execute(program, in, limits);
        CHECK(scratch.integer == fresh.integer);
        CHECK(scratch.print_buffer == fresh.print_buffer);
        CHECK(scratch.string == fresh.string);
    }
}

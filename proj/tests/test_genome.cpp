#include <doctest.h>

#include <array>
#include <cmath>

#include "novlex/errors.hpp"
#include "novlex/genome.hpp"
#include "novlex/problems.hpp"

using namespace novlex;

TEST_SUITE("genome")
{
    TEST_CASE("same seed gives the same genome")
    {
        auto atoms = build_problem("rswn").atoms;
        ExecutionLimits limits;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng a = derive_stream({seed});
            Rng b = derive_stream({seed});
            CHECK(random_genome(a, limits, atoms) == random_genome(b, limits, atoms));
        }
    }

    TEST_CASE("lengths stay within [1, max_initial_genome_size]")
    {
        auto atoms = build_problem("mirror-image").atoms;
        ExecutionLimits limits;
        limits.max_initial_genome_size = 50;
        Rng rng = derive_stream({3});
        std::size_t shortest = 1000;
        std::size_t longest = 0;
        for (int i = 0; i < 1000; ++i) {
            auto n = random_genome(rng, limits, atoms).size();
            shortest = std::min(shortest, n);
            longest = std::max(longest, n);
        }
        CHECK(shortest >= 1);
        CHECK(longest <= 50);
        CHECK(shortest <= 3);
        CHECK(longest >= 48);
    }

    TEST_CASE("close counts follow the declared distribution")
    {
        Rng rng = derive_stream({4});
        std::array<std::size_t, 4> seen{};
        const std::size_t n = 100000;
        for (std::size_t i = 0; i < n; ++i) {
            auto c = random_close_count(rng);
            REQUIRE(c < 4);
            ++seen[c];
        }
        double chi = 0.0;
        for (std::size_t c = 0; c < 4; ++c) {
            double freq = static_cast<double>(seen[c]) / n;
            CHECK(std::abs(freq - close_count_distribution[c]) <= 0.01);
            double expected = close_count_distribution[c] * n;
            chi += (seen[c] - expected) * (seen[c] - expected) / expected;
        }
        // 3 degrees of freedom, 0.001 critical value.
        CHECK(chi < 16.27);
    }

    TEST_CASE("empty instruction set is a configuration error")
    {
        AtomSet atoms{{}, {Erc::integer}, {}};
        Rng rng = derive_stream({5});
        CHECK_THROWS_AS(random_genome(rng, ExecutionLimits{}, atoms), ConfigError);
    }

    TEST_CASE("ERC ranges")
    {
        Rng rng = derive_stream({6});
        for (int i = 0; i < 5000; ++i) {
            auto x = std::get<std::int64_t>(random_erc(Erc::integer, rng));
            CHECK((x >= -100 && x <= 100));
            auto f = std::get<double>(random_erc(Erc::floating, rng));
            CHECK((f >= -100.0 && f <= 100.0));
            CHECK(std::abs(f * 10000.0 - std::round(f * 10000.0)) < 1e-6);
            auto ch = std::get<std::string>(random_erc(Erc::character, rng));
            REQUIRE(ch.size() == 1);
            CHECK((ch[0] >= 32 && ch[0] <= 126));
            auto s = std::get<std::string>(random_erc(Erc::string, rng));
            CHECK(s.size() <= 10);
            for (char c : s) {
                CHECK((c >= 32 && c <= 126));
            }
        }
    }

    TEST_CASE("genes draw every atom kind")
    {
        AtomSet atoms{{InstructionRegistry::builtin().require("integer_add")}, {Erc::boolean}, {std::string("k")}};
        Rng rng = derive_stream({9});
        std::array<std::size_t, 3> kinds{};
        for (int i = 0; i < 30000; ++i) {
            auto g = random_gene(atoms, rng);
            if (g.is_instruction()) {
                ++kinds[0];
            } else if (std::holds_alternative<bool>(std::get<Value>(g.payload))) {
                ++kinds[1];
            } else {
                CHECK(std::get<std::string>(std::get<Value>(g.payload)) == "k");
                ++kinds[2];
            }
        }
        for (auto k : kinds) {
            CHECK(std::abs(static_cast<double>(k) / 30000.0 - 1.0 / 3.0) < 0.015);
        }
    }
}

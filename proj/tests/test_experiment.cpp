#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "novlex/errors.hpp"
#include "novlex/experiment.hpp"

using namespace novlex;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(std::string_view tag)
        : path(fs::temp_directory_path() / ("novlex-test-" + std::string(tag) + "-" + std::to_string(::getpid())))
    {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig tiny(const fs::path& out)
{
    ExperimentConfig c;
    c.problems = {"echo-smoke", "mirror-image"};
    c.strategies = {"lexicase", "novelty-lexicase"};
    c.run_count = 3;
    c.seed_base = 500;
    c.population_size = 20;
    c.max_generations = 4;
    c.simplification_steps = 100;
    c.output_dir = out;
    return c;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) {
            files[fs::relative(e.path(), dir).generic_string()] = slurp(e.path());
        }
    }
    return files;
}

} // namespace

TEST_SUITE("experiment")
{
    TEST_CASE("config text round trips")
    {
        auto c = preset("paper-300");
        c.output_dir = "some/dir";
        c.parallelism = 3;
        c.rates = {0.25, 0.25, 0.0, 0.5};
        c.variation.alignment_deviation = 7.5;
        c.train_cases = "train.jsonl";
        c.test_cases = "test.jsonl";
        std::istringstream text(format_config(c));
        ExperimentConfig back;
        parse_config(text, back);
        CHECK(back == c);
        CHECK(format_config(back) == format_config(c));
        CHECK(format_config(c, false).find("parallelism") == std::string::npos);
        CHECK(format_config(c, false).find("some/dir") == std::string::npos);
    }

    TEST_CASE("presets")
    {
        auto desk = preset("desk");
        CHECK(desk.population_size == 200);
        CHECK(desk.max_generations == 100);
        auto p300 = preset("paper-300");
        CHECK(p300.population_size == 1000);
        CHECK(p300.max_generations == 300);
        CHECK(p300.run_count == 100);
        auto p1000 = preset("paper-1000");
        CHECK(p1000.max_generations == 1000);
        for (auto name : preset_names()) {
            CHECK_NOTHROW(preset(name).validate());
        }
        CHECK_THROWS_AS(preset("huge"), ConfigError);
    }

    TEST_CASE("settings and parse errors")
    {
        ExperimentConfig c;
        apply_setting(c, "problem", "csl, rswn");
        CHECK(c.problems == std::vector<std::string>{"csl", "rswn"});
        apply_setting(c, "population", "50");
        CHECK(c.population_size == 50);
        apply_setting(c, "stop-on-success", "false");
        CHECK_FALSE(c.stop_on_success);
        CHECK_THROWS_AS(apply_setting(c, "population", "fifty"), ConfigError);
        CHECK_THROWS_AS(apply_setting(c, "colour", "red"), ConfigError);

        c.output_dir = "keep";
        apply_setting(c, "preset", "desk");
        CHECK(c.population_size == 200);
        CHECK(c.output_dir == "keep");

        std::istringstream text("# comment\npopulation = 30 ; trailing\n[rates]\nalternation = 0.2\n");
        ExperimentConfig parsed;
        parse_config(text, parsed);
        CHECK(parsed.population_size == 30);

        std::istringstream broken("population = 30\nnonsense\n");
        try {
            parse_config(broken, parsed);
            FAIL("expected a parse error");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }

    TEST_CASE("validation")
    {
        ExperimentConfig c;
        CHECK_NOTHROW(c.validate());
        c.problems = {"nope"};
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c.problems = {"csl", "csl"};
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c.problems = {"csl"};
        c.strategies = {"roulette"};
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c.strategies = {"lexicase"};
        c.run_count = 0;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c.run_count = 1;
        c.rates.alternation = 0.9;
        CHECK_THROWS_AS(c.validate(), ConfigError);

        ExperimentConfig refused;
        refused.problems = {"negative-to-zero"};
        refused.strategies = {"lexicase", "novelty"};
        CHECK_THROWS_AS(refused.validate(), StrategyUnavailable);
        refused.strategies = {"novelty-lexicase"};
        CHECK_NOTHROW(refused.validate());
    }

    TEST_CASE("engine configs use seed_base plus the run index")
    {
        ExperimentConfig c;
        c.seed_base = 100;
        c.tournament_size = 5;
        auto e = engine_config(c, "csl", "tournament", 7);
        CHECK(e.seed == 107);
        CHECK(e.selection == SelectionStrategy::tournament(5));
        auto n = engine_config(c, "csl", "novelty", 0);
        CHECK(n.selection == SelectionStrategy::novelty(2, 25));
    }

    TEST_CASE("run logs round trip")
    {
        LoggedRun run;
        run.problem = "rswn";
        run.strategy = "lexicase";
        run.run_id = 4;
        run.seed = 9;
        run.outcome.success = true;
        run.outcome.generalized = true;
        run.outcome.solution_generation = 1;
        run.outcome.solution_program = "(in1 \"\\n\")";
        run.outcome.per_generation = {RunRecord{0, 0.5, 10.25, 20.5, false, 0}, RunRecord{1, 0.75, 0.0, 3.0, true, 1}};
        CHECK(run_from_json(run_to_json(run)) == run);
        run.wall_seconds = 1.5;
        CHECK(run_from_json(run_to_json(run)) == run);
        CHECK_THROWS_AS(run_from_json("{}"), ConfigError);
        CHECK_THROWS_AS(run_from_json("not json"), ConfigError);

        auto csv = run_to_csv(run);
        CHECK(csv.starts_with(
            "run_id,generation,behavioral_diversity,best_total_error,mean_total_error,archive_size,solution_found\n"));
        CHECK(csv.find("4,1,0.75,0.0,3.0,1,1\n") != std::string::npos);
    }

    TEST_CASE("run_experiment writes one log per run and is reproducible")
    {
        TempDir tmp("run");
        auto c = tiny(tmp.path / "a");
        auto summary = run_experiment(c);
        for (const auto& p : c.problems) {
            for (const auto& s : c.strategies) {
                std::size_t json = 0;
                std::size_t csv = 0;
                for (const auto& e : fs::directory_iterator(tmp.path / "a" / p / s)) {
                    json += e.path().extension() == ".json" ? 1 : 0;
                    csv += e.path().extension() == ".csv" ? 1 : 0;
                }
                CHECK(json == 3);
                CHECK(csv == 3);
            }
        }
        CHECK(fs::exists(tmp.path / "a" / "summary.csv"));
        CHECK(fs::exists(tmp.path / "a" / "experiment.cfg"));
        auto manifest = slurp(tmp.path / "a" / "manifest.jsonl");
        CHECK(std::count(manifest.begin(), manifest.end(), '\n') == 12);
        CHECK(slurp(tmp.path / "a" / "summary.csv").starts_with(
            "problem,strategy,runs,successes,generalized,mean_solution_generation\n"));
        CHECK(summary.strategies.size() == 4);

        c.output_dir = tmp.path / "b";
        c.parallelism = 2;
        run_experiment(c);
        CHECK(snapshot(tmp.path / "a") == snapshot(tmp.path / "b"));
    }

    TEST_CASE("refused experiments leave nothing behind")
    {
        TempDir tmp("refuse");
        ExperimentConfig c = tiny(tmp.path / "out");
        c.problems = {"negative-to-zero"};
        c.strategies = {"lexicase", "novelty"};
        CHECK_THROWS_AS(run_experiment(c), StrategyUnavailable);
        CHECK_FALSE(fs::exists(tmp.path / "out"));
    }

    TEST_CASE("analysis")
    {
        TempDir tmp("analyze");
        CHECK_THROWS_AS(analyze_logs(tmp.path / "missing"), UsageError);
        fs::create_directories(tmp.path / "empty");
        CHECK_THROWS_AS(analyze_logs(tmp.path / "empty"), UsageError);

        auto c = tiny(tmp.path / "exp");
        auto summary = run_experiment(c);
        std::ostringstream report;
        auto result = analyze_logs(c.output_dir, &report);
        CHECK(result.runs_found == 12);
        REQUIRE(result.summary.strategies.size() == summary.strategies.size());
        for (const auto& s : summary.strategies) {
            auto it = std::find_if(result.summary.strategies.begin(), result.summary.strategies.end(),
                                   [&](const auto& r) { return r.problem == s.problem && r.strategy == s.strategy; });
            REQUIRE(it != result.summary.strategies.end());
            CHECK(it->stats.success_count == s.stats.success_count);
            CHECK(it->stats.generalized_count == s.stats.generalized_count);
            CHECK(it->stats.accumulated == s.stats.accumulated);
        }
        REQUIRE(result.summary.tests.size() == summary.tests.size());
        for (std::size_t t = 0; t < summary.tests.size(); ++t) {
            const auto& counts_of = summary.strategies;
            std::vector<SuccessCount> counts;
            for (const auto& s : counts_of) {
                if (s.problem == result.summary.tests[t].problem) {
                    counts.push_back({s.strategy, s.stats.generalized_count, s.stats.runs});
                }
            }
            auto direct = chi_square_pairwise_holm(counts);
            REQUIRE(direct.pairs.size() == result.summary.tests[t].report.pairs.size());
            for (std::size_t k = 0; k < direct.pairs.size(); ++k) {
                CHECK(result.summary.tests[t].report.pairs[k].statistic == direct.pairs[k].statistic);
                CHECK(result.summary.tests[t].report.pairs[k].p_adjusted == direct.pairs[k].p_adjusted);
            }
        }
        for (auto name : {"success.csv", "solution_generation.csv", "accumulated.csv", "diversity.csv",
                          "generalization.csv", "chi_square.csv"}) {
            CHECK(fs::exists(c.output_dir / "analysis" / name));
        }
        for (const auto& s : result.summary.strategies) {
            CHECK_FALSE(s.diversity.empty());
        }
        CHECK(report.str().find("echo-smoke") != std::string::npos);

        // Partial experiments report only the finished runs.
        fs::remove(c.output_dir / "mirror-image" / "lexicase" / "run_0.json");
        auto partial = analyze_logs(c.output_dir);
        CHECK(partial.runs_found == 11);
    }

    TEST_CASE("single successful run shows in the success table")
    {
        TempDir tmp("single");
        ExperimentConfig c = tiny(tmp.path / "one");
        c.problems = {"echo-smoke"};
        c.strategies = {"lexicase"};
        c.run_count = 1;
        run_experiment(c);
        auto result = analyze_logs(c.output_dir);
        REQUIRE(result.summary.strategies.size() == 1);
        CHECK(result.summary.strategies[0].stats.success_count == 1);
        CHECK(slurp(c.output_dir / "analysis" / "success.csv").find("echo-smoke,lexicase,1,1,") != std::string::npos);
        auto diversity = slurp(c.output_dir / "analysis" / "diversity.csv");
        auto rows = std::count(diversity.begin(), diversity.end(), '\n') - 1;
        CHECK(static_cast<std::size_t>(rows) == result.summary.strategies[0].diversity.size());
    }

    TEST_CASE("pinned cases")
    {
        TempDir tmp("pinned");
        fs::create_directories(tmp.path);
        auto spec = build_problem("echo-smoke");
        std::vector<TestCase> train{{{std::int64_t{3}}, {std::int64_t{3}}}, {{std::int64_t{-4}}, {std::int64_t{-4}}}};
        std::vector<TestCase> test{{{std::int64_t{8}}, {std::int64_t{8}}}};
        {
            std::ofstream a(tmp.path / "train.jsonl");
            write_cases(a, train);
            std::ofstream b(tmp.path / "test.jsonl");
            write_cases(b, test);
        }
        ExperimentConfig c = tiny(tmp.path / "out");
        c.problems = {"echo-smoke"};
        c.strategies = {"lexicase"};
        c.run_count = 1;
        c.train_cases = tmp.path / "train.jsonl";
        c.test_cases = tmp.path / "test.jsonl";
        auto pinned = pinned_cases(c);
        REQUIRE(pinned);
        CHECK(pinned->train == train);
        CHECK(pinned->test == test);
        run_experiment(c);
        auto run = run_from_json(slurp(c.output_dir / "echo-smoke" / "lexicase" / "run_0.json"));
        CHECK(run.outcome.success);

        auto both = c;
        both.problems = {"echo-smoke", "csl"};
        CHECK_THROWS_AS(both.validate(), ConfigError);
        auto half = c;
        half.test_cases.clear();
        CHECK_THROWS_AS(half.validate(), ConfigError);
        auto wrong = c;
        wrong.problems = {"csl"};
        CHECK_THROWS_AS(wrong.validate(), ConfigError);
    }

    TEST_CASE("default output directory")
    {
        ::unsetenv(output_dir_env);
        CHECK(default_output_dir() == fs::path("runs"));
        ::setenv(output_dir_env, "/tmp/elsewhere", 1);
        CHECK(default_output_dir() == fs::path("/tmp/elsewhere"));
        ::unsetenv(output_dir_env);
    }
}

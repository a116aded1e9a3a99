// Acceptance gate: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "novlex/evolution.hpp"
#include "novlex/experiment.hpp"
#include "novlex/metrics.hpp"
#include "novlex/parallel.hpp"
#include "selftest.hpp"

using namespace novlex;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool passed = false;
    std::string detail;
};

std::size_t workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunOutcome> run_many(const std::vector<EngineConfig>& configs)
{
    std::vector<RunOutcome> out(configs.size());
    parallel_for(configs.size(), workers(), [&](std::size_t, std::size_t i) { out[i] = Engine(configs[i]).run(); });
    return out;
}

EngineConfig engine(std::string problem, SelectionStrategy selection, std::size_t generations, std::uint64_t seed)
{
    EngineConfig c;
    c.problem = std::move(problem);
    c.population_size = 200;
    c.max_generations = generations;
    c.selection = selection;
    c.seed = seed;
    return c;
}

Verdict from_suite(const oracle::SuiteResult& r)
{
    return {r.passed, r.detail};
}

Verdict smoke()
{
    std::vector<EngineConfig> configs;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        configs.push_back(engine("echo-smoke", SelectionStrategy::lexicase(), 20, seed));
    }
    auto start = std::chrono::steady_clock::now();
    auto outcomes = run_many(configs);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::size_t solved = 0;
    std::size_t latest = 0;
    for (const auto& o : outcomes) {
        if (o.success) {
            ++solved;
            latest = std::max(latest, *o.solution_generation);
        }
    }
    std::ostringstream d;
    d << solved << "/10 runs solved (latest at generation " << latest << "), " << seconds << "s of 120s";
    return {solved >= 9 && seconds <= 120.0, d.str()};
}

// Mean of the per-generation mean diversity curve over generations [40, 50),
// counting only runs still searching at each generation.
double final_diversity(const std::vector<RunOutcome>& runs)
{
    auto curve = mean_diversity_curve(runs);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t g = 40; g < std::min<std::size_t>(50, curve.size()); ++g) {
        sum += curve[g].mean;
        ++n;
    }
    return n == 0 ? std::nan("") : sum / static_cast<double>(n);
}

Verdict diversity_ordering()
{
    const std::vector<SelectionStrategy> strategies{SelectionStrategy::novelty_lexicase(), SelectionStrategy::lexicase(),
                                                    SelectionStrategy::tournament()};
    std::vector<EngineConfig> configs;
    for (std::size_t rep = 0; rep < 10; ++rep) {
        for (const auto& s : strategies) {
            for (std::size_t i = 0; i < 10; ++i) {
                configs.push_back(engine("mirror-image", s, 50, 6000 + 10 * rep + i));
            }
        }
    }
    auto start = std::chrono::steady_clock::now();
    auto outcomes = run_many(configs);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::size_t ordered = 0;
    std::ostringstream d;
    d.precision(3);
    for (std::size_t rep = 0; rep < 10; ++rep) {
        double div[3];
        for (std::size_t s = 0; s < 3; ++s) {
            auto first = outcomes.begin() + static_cast<std::ptrdiff_t>((rep * 3 + s) * 10);
            div[s] = final_diversity(std::vector<RunOutcome>(first, first + 10));
        }
        bool ok = div[0] > div[1] && div[1] > div[2];
        ordered += ok ? 1 : 0;
        d << (rep == 0 ? "" : "; ") << div[0] << ">" << div[1] << ">" << div[2] << (ok ? "" : " (no)");
    }
    std::ostringstream head;
    head << ordered << "/10 replications ordered novelty-lexicase > lexicase > tournament, " << seconds
         << "s of 1800s [" << d.str() << "]";
    return {ordered >= 8 && seconds <= 1800.0, head.str()};
}

Verdict mirror_solvability()
{
    std::vector<EngineConfig> configs;
    for (const auto& s : {SelectionStrategy::lexicase(), SelectionStrategy::novelty_lexicase()}) {
        for (std::uint64_t i = 0; i < 10; ++i) {
            configs.push_back(engine("mirror-image", s, 100, 7000 + i));
        }
    }
    auto start = std::chrono::steady_clock::now();
    auto outcomes = run_many(configs);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::size_t solved[2] = {0, 0};
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        solved[k / 10] += outcomes[k].success && outcomes[k].generalized ? 1 : 0;
    }
    std::ostringstream d;
    d << "lexicase " << solved[0] << "/10, novelty-lexicase " << solved[1] << "/10 solved and generalized, "
      << seconds << "s of 3600s";
    return {solved[0] >= 5 && solved[1] >= 5 && seconds <= 3600.0, d.str()};
}

std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) {
            std::ifstream in(e.path(), std::ios::binary);
            std::stringstream s;
            s << in.rdbuf();
            files[fs::relative(e.path(), dir).generic_string()] = s.str();
        }
    }
    return files;
}

Verdict determinism()
{
    auto root = fs::temp_directory_path() / ("novlex-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(root);
    ExperimentConfig c;
    c.problems = {"echo-smoke", "mirror-image", "rswn", "vector-average"};
    c.strategies = {"tournament", "lexicase", "novelty", "novelty-lexicase"};
    c.run_count = 3;
    c.seed_base = 90;
    c.population_size = 40;
    c.max_generations = 6;
    c.simplification_steps = 200;

    std::vector<std::map<std::string, std::string>> outputs;
    for (std::size_t parallelism : {std::size_t{1}, std::size_t{3}, std::size_t{1}}) {
        c.parallelism = parallelism;
        c.output_dir = root / ("p" + std::to_string(outputs.size()));
        run_experiment(c);
        analyze_logs(c.output_dir);
        outputs.push_back(snapshot(c.output_dir));
    }
    fs::remove_all(root);

    bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2];
    std::size_t runs = 0;
    for (const auto& [name, _] : outputs[0]) {
        runs += name.ends_with(".json") ? 1 : 0;
    }
    std::ostringstream d;
    d << outputs[0].size() << " files (" << runs << " run logs plus summaries and analysis) "
      << (same ? "byte-identical" : "DIFFER") << " across reruns at parallelism 1, 3, 1";
    return {same, d.str()};
}

} // namespace

int main(int argc, char** argv)
{
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) {
        wanted.insert(std::atoi(argv[i]));
    }
    const std::uint64_t seed = 1;
    const std::vector<std::pair<int, std::pair<std::string, std::function<Verdict()>>>> criteria{
        {1, {"lexicase oracle equivalence", [&] { return from_suite(oracle::lexicase_suite(seed)); }}},
        {2, {"novelty-lexicase reduction", [&] { return from_suite(oracle::novelty_lexicase_suite(seed)); }}},
        {3, {"novelty counts and k-NN", [&] { return from_suite(oracle::novelty_knn_suite(seed)); }}},
        {4, {"behavioral diversity exactness", [&] { return from_suite(oracle::diversity_suite(seed)); }}},
        {5, {"smoke solvability", smoke}},
        {6, {"diversity ordering on mirror-image", diversity_ordering}},
        {7, {"desk-scale mirror-image solvability", mirror_solvability}},
        {8, {"statistics correctness", [&] { return from_suite(oracle::statistics_suite(seed)); }}},
        {9, {"determinism", determinism}},
    };

    bool all = true;
    for (const auto& [id, entry] : criteria) {
        if (!wanted.empty() && !wanted.contains(id)) {
            continue;
        }
        Verdict v;
        try {
            v = entry.second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        std::cout << "criterion " << id << ": " << (v.passed ? "PASS" : "FAIL") << "  " << entry.first << ": "
                  << v.detail << std::endl;
        all = all && v.passed;
    }
    return all ? 0 : 1;
}

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "novlex/errors.hpp"
#include "novlex/experiment.hpp"
#include "novlex/problems.hpp"
#include "selftest.hpp"

using namespace novlex;

namespace {

constexpr int exit_usage = 2;

void list_problems()
{
    std::cout << std::left << std::setw(20) << "problem" << std::setw(36) << "inputs" << std::setw(26) << "outputs"
              << "distance\n";
    for (auto name : problem_names()) {
        auto spec = build_problem(name);
        std::string inputs;
        for (auto t : spec.input_schema) {
            inputs += (inputs.empty() ? "" : ", ") + std::string(type_name(t));
        }
        std::string outputs;
        for (auto k : spec.output_schema) {
            outputs += (outputs.empty() ? "" : ", ") + std::string(output_kind_name(k));
        }
        std::cout << std::left << std::setw(20) << spec.name << std::setw(36) << inputs << std::setw(26) << outputs
                  << distance_kind_name(spec.distance) << '\n';
    }
}

// Writes <problem>.train.jsonl and <problem>.test.jsonl holding the cases a run
// with this seed would generate.
void write_case_files(const std::filesystem::path& dir, std::uint64_t seed)
{
    std::filesystem::create_directories(dir);
    for (auto name : problem_names()) {
        auto spec = build_problem(name);
        auto rng = derive_stream({seed, stream::cases});
        auto sets = generate_cases(spec, rng);
        for (auto [suffix, cases] : {std::pair{".train.jsonl", &sets.train}, std::pair{".test.jsonl", &sets.test}}) {
            auto path = dir / (std::string(name) + suffix);
            std::ofstream out(path, std::ios::binary);
            write_cases(out, *cases);
            if (!out) {
                throw std::runtime_error("cannot write " + path.string());
            }
        }
    }
}

int selftest(std::uint64_t seed)
{
    bool ok = true;
    for (const auto& r : oracle::run_selftest(seed)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << std::endl;
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Push-style genetic programming with lexicase, novelty and novelty-lexicase selection"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute an experiment and write run logs");
    std::string preset_name;
    std::string config_path;
    run->add_option("--preset", preset_name, "start from a preset: desk, paper-300, paper-1000");
    run->add_option("--config", config_path, "key = value settings file, applied after the preset")
        ->check(CLI::ExistingFile);
    std::map<std::string, std::string> overrides;
    for (auto key : setting_keys()) {
        std::string k(key);
        run->add_option_function<std::string>("--" + k, [&overrides, k](const std::string& v) { overrides[k] = v; },
                                              "override '" + k + "'");
    }
    bool quiet = false;
    run->add_flag("--quiet", quiet, "no per-run progress lines");
    bool print_config = false;
    run->add_flag("--print-config", print_config, "print the effective configuration and exit");

    auto* analyze = app.add_subcommand("analyze", "summarize run logs into tables and CSV curves");
    std::string input_dir;
    std::string analysis_dir;
    analyze->add_option("dir", input_dir, "experiment directory (default: $" + std::string(output_dir_env) + " or runs)");
    analyze->add_option("--out", analysis_dir, "where to write the CSVs (default: <dir>/analysis)");

    auto* self = app.add_subcommand("selftest", "check selection, novelty, diversity and statistics against oracles");
    std::uint64_t seed = 1;
    self->add_option("--seed", seed, "oracle seed");

    auto* list = app.add_subcommand("list-problems", "list benchmark problems");
    std::string cases_dir;
    std::uint64_t cases_seed = 0;
    list->add_option("--write-cases", cases_dir, "also write each problem's train/test cases as JSONL into this directory");
    list->add_option("--seed", cases_seed, "run seed whose cases are written");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) {
            ExperimentConfig config;
            if (!preset_name.empty()) {
                config = preset(preset_name);
            }
            if (!config_path.empty()) {
                load_config(config_path, config);
            }
            // Flags are applied in canonical key order, after the file.
            for (auto key : setting_keys()) {
                if (auto it = overrides.find(std::string(key)); it != overrides.end()) {
                    apply_setting(config, key, it->second);
                }
            }
            if (print_config) {
                config.validate();
                std::cout << format_config(config);
                return 0;
            }
            auto summary = run_experiment(config, quiet ? nullptr : &std::cerr);
            std::cout << '\n';
            print_summary(std::cout, summary);
            return 0;
        }
        if (*analyze) {
            std::filesystem::path dir = input_dir.empty() ? default_output_dir() : std::filesystem::path(input_dir);
            std::optional<std::filesystem::path> out;
            if (!analysis_dir.empty()) {
                out = analysis_dir;
            }
            analyze_logs(dir, &std::cout, out);
            return 0;
        }
        if (*self) {
            return selftest(seed);
        }
        list_problems();
        if (!cases_dir.empty()) {
            write_case_files(cases_dir, cases_seed);
        }
        return 0;
    } catch (const StrategyUnavailable& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return exit_usage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << '\n';
        return 1;
    }
}

#include "novlex/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "novlex/errors.hpp"
#include "novlex/value.hpp"

namespace novlex {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// ---- config -----------------------------------------------------------------------

namespace {

constexpr std::string_view presets[] = {"desk", "paper-300", "paper-1000"};

constexpr std::string_view keys[] = {
    "problem",
    "strategy",
    "runs",
    "seed-base",
    "population",
    "generations",
    "tournament-size",
    "novelty-tournament-size",
    "k-neighbors",
    "rates-alternation",
    "rates-uniform-mutation",
    "rates-uniform-close-mutation",
    "rates-alternation-then-mutation",
    "variation-alternation-rate",
    "variation-alignment-deviation",
    "variation-mutation-rate",
    "variation-close-mutation-rate",
    "step-limit",
    "max-genome-size",
    "max-initial-genome-size",
    "train-count",
    "test-count",
    "train-cases",
    "test-cases",
    "simplification-steps",
    "stop-on-success",
    "out",
    "deterministic",
    "parallelism",
};

std::string_view trim(std::string_view s)
{
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view key, std::string_view value)
{
    std::vector<std::string> out;
    while (true) {
        auto comma = value.find(',');
        auto item = trim(value.substr(0, comma));
        if (item.empty()) {
            throw ConfigError(std::string(key) + ": empty list item");
        }
        out.emplace_back(item);
        if (comma == std::string_view::npos) {
            return out;
        }
        value.remove_prefix(comma + 1);
    }
}

template <class T>
T parse_number(std::string_view key, std::string_view text)
{
    T v{};
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw ConfigError(std::string(key) + ": invalid number '" + std::string(text) + "'");
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (const auto& i : items) {
        if (!out.empty()) {
            out += ",";
        }
        out += i;
    }
    return out;
}

} // namespace

std::span<const std::string_view> preset_names()
{
    return presets;
}

ExperimentConfig preset(std::string_view name)
{
    ExperimentConfig c;
    if (name == "desk") {
        c.population_size = 200;
        c.max_generations = 100;
        c.run_count = 10;
        c.strategies = {"tournament", "lexicase", "novelty-lexicase"};
        c.problems = {"mirror-image"};
        return c;
    }
    if (name == "paper-300" || name == "paper-1000") {
        c.population_size = 1000;
        c.max_generations = name == "paper-300" ? 300 : 1000;
        c.run_count = 100;
        c.test_count = 1000;
        c.problems.clear();
        // Novelty search has no distance for negative-to-zero, so paper-300 leaves
        // it out; run it separately with the other three strategies.
        for (auto p : problem_names()) {
            if (p != "echo-smoke" && (name == "paper-1000" || p != "negative-to-zero")) {
                c.problems.emplace_back(p);
            }
        }
        c.strategies = name == "paper-300"
                           ? std::vector<std::string>{"novelty-lexicase", "lexicase", "tournament", "novelty"}
                           : std::vector<std::string>{"novelty-lexicase", "lexicase"};
        return c;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::span<const std::string_view> setting_keys()
{
    return keys;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view raw)
{
    auto value = trim(raw);
    auto size = [&] { return parse_number<std::size_t>(key, value); };
    auto real = [&] { return parse_number<double>(key, value); };

    if (key == "preset") {
        auto out = c.output_dir;
        c = preset(value);
        c.output_dir = out;
    } else if (key == "problem") {
        c.problems = split_list(key, value);
    } else if (key == "strategy") {
        c.strategies = split_list(key, value);
    } else if (key == "runs") {
        c.run_count = size();
    } else if (key == "seed-base") {
        c.seed_base = parse_number<std::uint64_t>(key, value);
    } else if (key == "population") {
        c.population_size = size();
    } else if (key == "generations") {
        c.max_generations = size();
    } else if (key == "tournament-size") {
        c.tournament_size = size();
    } else if (key == "novelty-tournament-size") {
        c.novelty_tournament_size = size();
    } else if (key == "k-neighbors") {
        c.k_neighbors = size();
    } else if (key == "rates-alternation") {
        c.rates.alternation = real();
    } else if (key == "rates-uniform-mutation") {
        c.rates.uniform_mutation = real();
    } else if (key == "rates-uniform-close-mutation") {
        c.rates.uniform_close_mutation = real();
    } else if (key == "rates-alternation-then-mutation") {
        c.rates.alternation_then_mutation = real();
    } else if (key == "variation-alternation-rate") {
        c.variation.alternation_rate = real();
    } else if (key == "variation-alignment-deviation") {
        c.variation.alignment_deviation = real();
    } else if (key == "variation-mutation-rate") {
        c.variation.mutation_rate = real();
    } else if (key == "variation-close-mutation-rate") {
        c.variation.close_mutation_rate = real();
    } else if (key == "step-limit") {
        c.limits.step_limit = size();
    } else if (key == "max-genome-size") {
        c.limits.max_genome_size = size();
    } else if (key == "max-initial-genome-size") {
        c.limits.max_initial_genome_size = size();
    } else if (key == "train-count") {
        c.train_count = size();
    } else if (key == "test-count") {
        c.test_count = size();
    } else if (key == "train-cases") {
        c.train_cases = std::string(value);
    } else if (key == "test-cases") {
        c.test_cases = std::string(value);
    } else if (key == "simplification-steps") {
        c.simplification_steps = size();
    } else if (key == "stop-on-success") {
        c.stop_on_success = parse_bool(key, value);
    } else if (key == "out") {
        c.output_dir = std::string(value);
    } else if (key == "deterministic") {
        c.deterministic = parse_bool(key, value);
    } else if (key == "parallelism") {
        c.parallelism = size();
    } else {
        throw ConfigError("unknown setting '" + std::string(key) + "'");
    }
}

std::string format_config(const ExperimentConfig& c, bool execution)
{
    std::ostringstream out;
    auto line = [&](std::string_view k, const auto& v) { out << k << " = " << v << '\n'; };
    line("problem", join(c.problems));
    line("strategy", join(c.strategies));
    line("runs", c.run_count);
    line("seed-base", c.seed_base);
    line("population", c.population_size);
    line("generations", c.max_generations);
    line("tournament-size", c.tournament_size);
    line("novelty-tournament-size", c.novelty_tournament_size);
    line("k-neighbors", c.k_neighbors);
    line("train-count", c.train_count);
    line("test-count", c.test_count);
    if (!c.train_cases.empty()) {
        line("train-cases", c.train_cases.generic_string());
    }
    if (!c.test_cases.empty()) {
        line("test-cases", c.test_cases.generic_string());
    }
    line("simplification-steps", c.simplification_steps);
    line("stop-on-success", c.stop_on_success ? "true" : "false");
    line("deterministic", c.deterministic ? "true" : "false");
    line("step-limit", c.limits.step_limit);
    line("max-genome-size", c.limits.max_genome_size);
    line("max-initial-genome-size", c.limits.max_initial_genome_size);
    if (execution) {
        line("parallelism", c.parallelism);
        if (!c.output_dir.empty()) {
            line("out", c.output_dir.generic_string());
        }
    }
    out << "\n[rates]\n";
    line("alternation", format_float(c.rates.alternation));
    line("uniform-mutation", format_float(c.rates.uniform_mutation));
    line("uniform-close-mutation", format_float(c.rates.uniform_close_mutation));
    line("alternation-then-mutation", format_float(c.rates.alternation_then_mutation));
    out << "\n[variation]\n";
    line("alternation-rate", format_float(c.variation.alternation_rate));
    line("alignment-deviation", format_float(c.variation.alignment_deviation));
    line("mutation-rate", format_float(c.variation.mutation_rate));
    line("close-mutation-rate", format_float(c.variation.close_mutation_rate));
    return out.str();
}

void parse_config(std::istream& in, ExperimentConfig& config)
{
    std::string section;
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        std::string_view line = raw;
        if (auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        try {
            if (line.front() == '[') {
                if (line.back() != ']') {
                    throw ConfigError("unterminated section header");
                }
                section = std::string(trim(line.substr(1, line.size() - 2)));
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw ConfigError("expected key = value");
            }
            std::string key(trim(line.substr(0, eq)));
            if (!section.empty()) {
                key = section + "-" + key;
            }
            apply_setting(config, key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void load_config(const fs::path& path, ExperimentConfig& config)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    try {
        parse_config(in, config);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

fs::path default_output_dir()
{
    if (const char* env = std::getenv(output_dir_env); env != nullptr && *env != '\0') {
        return env;
    }
    return "runs";
}

EngineConfig engine_config(const ExperimentConfig& c, std::string_view problem, std::string_view strategy,
                           std::size_t run_index)
{
    EngineConfig e;
    e.problem = std::string(problem);
    e.population_size = c.population_size;
    e.max_generations = c.max_generations;
    e.selection = parse_selection(strategy);
    switch (e.selection.kind) {
    case SelectionKind::tournament: e.selection.tournament_size = c.tournament_size; break;
    case SelectionKind::novelty:
        e.selection.tournament_size = c.novelty_tournament_size;
        e.selection.k_neighbors = c.k_neighbors;
        break;
    default: break;
    }
    e.rates = c.rates;
    e.variation = c.variation;
    e.limits = c.limits;
    e.seed = c.seed_base + run_index;
    e.simplification_steps = c.simplification_steps;
    e.stop_on_success = c.stop_on_success;
    e.threads = 1;
    e.train_count = c.train_count;
    e.test_count = c.test_count;
    return e;
}

std::optional<CaseSets> pinned_cases(const ExperimentConfig& c)
{
    if (c.train_cases.empty() && c.test_cases.empty()) {
        return std::nullopt;
    }
    if (c.train_cases.empty() || c.test_cases.empty()) {
        throw ConfigError("train-cases and test-cases must be given together");
    }
    if (c.problems.size() != 1) {
        throw ConfigError("pinned cases need exactly one problem");
    }
    auto spec = build_problem(c.problems.front());
    auto load = [&](const fs::path& path) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot read case file " + path.string());
        }
        std::vector<TestCase> cases;
        try {
            cases = read_cases(in, spec);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
        if (cases.empty()) {
            throw ConfigError(path.string() + ": no cases");
        }
        return cases;
    };
    return CaseSets{load(c.train_cases), load(c.test_cases)};
}

void ExperimentConfig::validate() const
{
    if (problems.empty() || strategies.empty()) {
        throw ConfigError("at least one problem and one strategy are required");
    }
    if (run_count == 0) {
        throw ConfigError("runs must be positive");
    }
    if (parallelism == 0) {
        throw ConfigError("parallelism must be positive");
    }
    auto check_unique = [](const std::vector<std::string>& v, std::string_view what) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (std::find(v.begin() + static_cast<std::ptrdiff_t>(i) + 1, v.end(), v[i]) != v.end()) {
                throw ConfigError(std::string(what) + " '" + v[i] + "' listed twice");
            }
        }
    };
    check_unique(problems, "problem");
    check_unique(strategies, "strategy");
    for (const auto& p : problems) {
        auto spec = build_problem(p);
        for (const auto& s : strategies) {
            auto e = engine_config(*this, p, s, 0);
            e.validate();
            if (e.selection.kind == SelectionKind::novelty && spec.distance == DistanceKind::unsupported) {
                throw StrategyUnavailable("novelty search is not available for " + p +
                                          ": its outputs have no behavior distance");
            }
        }
    }
    pinned_cases(*this);
}

// ---- run files --------------------------------------------------------------------

namespace {

Json stats_json(const PopulationStats& s)
{
    Json j;
    j["best_total_error"] = s.best_total_error;
    j["mean_total_error"] = s.mean_total_error;
    j["behavioral_diversity"] = s.behavioral_diversity;
    j["mean_genome_size"] = s.mean_genome_size;
    return j;
}

template <class T>
T field(const Json& j, const char* name)
{
    if (!j.contains(name)) {
        throw ConfigError(std::string("run file: missing field '") + name + "'");
    }
    return j.at(name).get<T>();
}

std::string csv_number(double v)
{
    return format_float(v);
}

void write_atomically(const fs::path& path, std::string_view content)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

std::string run_stem(std::size_t i)
{
    return "run_" + std::to_string(i);
}

} // namespace

std::string run_to_json(const LoggedRun& run)
{
    const auto& o = run.outcome;
    Json j;
    j["problem"] = run.problem;
    j["strategy"] = run.strategy;
    j["run_id"] = run.run_id;
    j["seed"] = run.seed;
    j["success"] = o.success;
    j["generalized"] = o.generalized;
    j["solution_generation"] = o.solution_generation ? Json(*o.solution_generation) : Json(nullptr);
    j["solution_program"] = o.solution_program ? Json(*o.solution_program) : Json(nullptr);
    j["solution_genome_size"] = o.solution_genome_size;
    j["simplified_genome_size"] = o.simplified_genome_size;
    j["failed_test_cases"] = o.failed_test_cases;
    j["final_population_stats"] = stats_json(o.final_population_stats);
    Json gens = Json::array();
    for (const auto& r : o.per_generation) {
        Json g;
        g["generation"] = r.generation;
        g["behavioral_diversity"] = r.behavioral_diversity;
        g["best_total_error"] = r.best_total_error;
        g["mean_total_error"] = r.mean_total_error;
        g["solution_found"] = r.solution_found;
        g["archive_size"] = r.archive_size;
        gens.push_back(std::move(g));
    }
    j["per_generation"] = std::move(gens);
    if (run.wall_seconds) {
        j["wall_seconds"] = *run.wall_seconds;
    }
    return j.dump(1) + "\n";
}

LoggedRun run_from_json(std::string_view text)
{
    try {
        auto j = Json::parse(text);
        LoggedRun run;
        run.problem = field<std::string>(j, "problem");
        run.strategy = field<std::string>(j, "strategy");
        run.run_id = field<std::size_t>(j, "run_id");
        run.seed = field<std::uint64_t>(j, "seed");
        auto& o = run.outcome;
        o.success = field<bool>(j, "success");
        o.generalized = field<bool>(j, "generalized");
        if (!j.at("solution_generation").is_null()) {
            o.solution_generation = j.at("solution_generation").get<std::size_t>();
        }
        if (!j.at("solution_program").is_null()) {
            o.solution_program = j.at("solution_program").get<std::string>();
        }
        o.solution_genome_size = field<std::size_t>(j, "solution_genome_size");
        o.simplified_genome_size = field<std::size_t>(j, "simplified_genome_size");
        o.failed_test_cases = field<std::size_t>(j, "failed_test_cases");
        const auto& s = j.at("final_population_stats");
        o.final_population_stats = {field<double>(s, "best_total_error"), field<double>(s, "mean_total_error"),
                                    field<double>(s, "behavioral_diversity"), field<double>(s, "mean_genome_size")};
        for (const auto& g : j.at("per_generation")) {
            RunRecord r;
            r.generation = field<std::size_t>(g, "generation");
            r.behavioral_diversity = field<double>(g, "behavioral_diversity");
            r.best_total_error = field<double>(g, "best_total_error");
            r.mean_total_error = field<double>(g, "mean_total_error");
            r.solution_found = field<bool>(g, "solution_found");
            r.archive_size = field<std::size_t>(g, "archive_size");
            o.per_generation.push_back(r);
        }
        if (j.contains("wall_seconds")) {
            run.wall_seconds = j.at("wall_seconds").get<double>();
        }
        return run;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("run file: ") + e.what());
    }
}

std::string run_to_csv(const LoggedRun& run)
{
    std::string out = "run_id,generation,behavioral_diversity,best_total_error,mean_total_error,archive_size,solution_found\n";
    for (const auto& r : run.outcome.per_generation) {
        out += std::to_string(run.run_id) + "," + std::to_string(r.generation) + "," +
               csv_number(r.behavioral_diversity) + "," + csv_number(r.best_total_error) + "," +
               csv_number(r.mean_total_error) + "," + std::to_string(r.archive_size) + "," +
               (r.solution_found ? "1" : "0") + "\n";
    }
    return out;
}

// ---- running ------------------------------------------------------------------------

namespace {

struct Task {
    std::size_t group;
    std::size_t run;
};

LoggedRun execute(const ExperimentConfig& config, const RunGroup& group, std::size_t run_index,
                  const std::optional<CaseSets>& cases)
{
    auto start = std::chrono::steady_clock::now();
    auto engine_cfg = engine_config(config, group.problem, group.strategy, run_index);
    LoggedRun run;
    run.problem = group.problem;
    run.strategy = group.strategy;
    run.run_id = run_index;
    run.seed = engine_cfg.seed;
    run.outcome = cases ? Engine(std::move(engine_cfg), *cases).run() : Engine(std::move(engine_cfg)).run();
    if (!config.deterministic) {
        run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return run;
}

std::string manifest_line(const LoggedRun& run, const fs::path& file)
{
    Json j;
    j["problem"] = run.problem;
    j["strategy"] = run.strategy;
    j["run_id"] = run.run_id;
    j["seed"] = run.seed;
    j["success"] = run.outcome.success;
    j["generalized"] = run.outcome.generalized;
    j["file"] = file.generic_string();
    return j.dump() + "\n";
}

std::string progress_line(const LoggedRun& run)
{
    std::ostringstream out;
    out << run.problem << '/' << run.strategy << " run " << run.run_id << " (seed " << run.seed << "): ";
    const auto& o = run.outcome;
    if (o.success) {
        out << "solved at generation " << *o.solution_generation << (o.generalized ? ", generalizes" : ", does not generalize");
    } else {
        out << "no solution, best total error " << format_float(o.per_generation.back().best_total_error);
    }
    if (run.wall_seconds) {
        out << " [" << std::fixed << std::setprecision(1) << *run.wall_seconds << "s]";
    }
    return out.str();
}

} // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream* progress)
{
    config.validate();
    const auto cases = pinned_cases(config);
    const fs::path out = config.output_dir.empty() ? default_output_dir() : config.output_dir;

    std::vector<RunGroup> groups;
    for (const auto& p : config.problems) {
        for (const auto& s : config.strategies) {
            groups.push_back({p, s, std::vector<RunOutcome>(config.run_count)});
        }
    }
    std::vector<Task> tasks;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t i = 0; i < config.run_count; ++i) {
            tasks.push_back({g, i});
        }
    }

    fs::create_directories(out);
    for (const auto& g : groups) {
        fs::create_directories(out / g.problem / g.strategy);
    }
    write_atomically(out / "experiment.cfg", format_config(config, false));
    std::ofstream manifest(out / "manifest.jsonl", std::ios::binary | std::ios::trunc);
    if (!manifest) {
        throw std::runtime_error("cannot write " + (out / "manifest.jsonl").string());
    }

    std::vector<std::optional<LoggedRun>> finished(tasks.size());
    std::vector<std::exception_ptr> failures(tasks.size());
    std::mutex mutex;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};

    auto worker = [&] {
        while (!abort) {
            std::size_t k = next++;
            if (k >= tasks.size()) {
                return;
            }
            const auto& group = groups[tasks[k].group];
            try {
                auto run = execute(config, group, tasks[k].run, cases);
                auto base = out / group.problem / group.strategy / run_stem(run.run_id);
                write_atomically(fs::path(base).concat(".csv"), run_to_csv(run));
                write_atomically(fs::path(base).concat(".json"), run_to_json(run));
                std::lock_guard lock(mutex);
                finished[k] = std::move(run);
            } catch (...) {
                std::lock_guard lock(mutex);
                failures[k] = std::current_exception();
            }
            ready.notify_all();
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(config.parallelism, tasks.size()); ++w) {
        pool.emplace_back(worker);
    }

    std::exception_ptr failure;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return finished[k].has_value() || failures[k] != nullptr; });
        if (failures[k]) {
            failure = failures[k];
            abort = true;
            break;
        }
        LoggedRun run = std::move(*finished[k]);
        finished[k].reset();
        lock.unlock();

        auto& group = groups[tasks[k].group];
        fs::path rel = fs::path(group.problem) / group.strategy / (run_stem(run.run_id) + ".json");
        manifest << manifest_line(run, rel) << std::flush;
        if (progress) {
            *progress << progress_line(run) << std::endl;
        }
        group.outcomes[run.run_id] = std::move(run.outcome);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    auto summary = summarize(groups);
    write_atomically(out / "summary.csv", summary_csv(summary));
    return summary;
}

// ---- analysis -----------------------------------------------------------------------

namespace {

std::string optional_number(const std::optional<double>& v)
{
    return v ? format_float(*v) : std::string();
}

std::size_t strategy_rank(std::string_view s)
{
    constexpr std::string_view order[] = {"novelty-lexicase", "lexicase", "tournament", "novelty"};
    for (std::size_t i = 0; i < std::size(order); ++i) {
        if (order[i] == s) {
            return i;
        }
    }
    return std::size(order);
}

} // namespace

std::string summary_csv(const ExperimentSummary& summary)
{
    std::string out = "problem,strategy,runs,successes,generalized,mean_solution_generation\n";
    for (const auto& s : summary.strategies) {
        out += s.problem + "," + s.strategy + "," + std::to_string(s.stats.runs) + "," +
               std::to_string(s.stats.success_count) + "," + std::to_string(s.stats.generalized_count) + "," +
               optional_number(s.stats.mean_solution_generation) + "\n";
    }
    return out;
}

std::string solution_generation_csv(const ExperimentSummary& summary)
{
    std::string out = "problem,strategy,successes,mean_solution_generation\n";
    for (const auto& s : summary.strategies) {
        out += s.problem + "," + s.strategy + "," + std::to_string(s.stats.success_count) + "," +
               optional_number(s.stats.mean_solution_generation) + "\n";
    }
    return out;
}

std::string accumulated_csv(const ExperimentSummary& summary)
{
    std::string out = "problem,strategy,generation,accumulated\n";
    for (const auto& s : summary.strategies) {
        for (std::size_t g = 0; g < s.stats.accumulated.size(); ++g) {
            out += s.problem + "," + s.strategy + "," + std::to_string(g) + "," +
                   std::to_string(s.stats.accumulated[g]) + "\n";
        }
    }
    return out;
}

std::string diversity_csv(const ExperimentSummary& summary)
{
    std::string out = "problem,strategy,generation,mean_behavioral_diversity,runs\n";
    for (const auto& s : summary.strategies) {
        for (std::size_t g = 0; g < s.diversity.size(); ++g) {
            out += s.problem + "," + s.strategy + "," + std::to_string(g) + "," + format_float(s.diversity[g].mean) +
                   "," + std::to_string(s.diversity[g].runs) + "\n";
        }
    }
    return out;
}

std::string generalization_csv(const ExperimentSummary& summary)
{
    std::string out = "problem,strategy,successes,generalized,generalization_rate\n";
    for (const auto& s : summary.strategies) {
        std::optional<double> rate;
        if (s.stats.success_count > 0) {
            rate = static_cast<double>(s.stats.generalized_count) / static_cast<double>(s.stats.success_count);
        }
        out += s.problem + "," + s.strategy + "," + std::to_string(s.stats.success_count) + "," +
               std::to_string(s.stats.generalized_count) + "," + optional_number(rate) + "\n";
    }
    return out;
}

std::string chi_square_csv(const ExperimentSummary& summary)
{
    std::string out = "problem,first,second,statistic,p_value,p_adjusted,significant\n";
    for (const auto& t : summary.tests) {
        for (const auto& p : t.report.pairs) {
            out += t.problem + "," + p.first + "," + p.second + "," + format_float(p.statistic) + "," +
                   format_float(p.p_value) + "," + format_float(p.p_adjusted) + "," + (p.significant ? "1" : "0") +
                   "\n";
        }
    }
    return out;
}

void print_summary(std::ostream& out, const ExperimentSummary& summary)
{
    auto flags = out.flags();
    out << std::left << std::setw(20) << "problem" << std::setw(18) << "strategy" << std::right << std::setw(6)
        << "runs" << std::setw(11) << "successes" << std::setw(13) << "generalized" << std::setw(10) << "mean gen"
        << '\n';
    for (const auto& s : summary.strategies) {
        std::string mean = "-";
        if (s.stats.mean_solution_generation) {
            std::ostringstream m;
            m << std::fixed << std::setprecision(1) << *s.stats.mean_solution_generation;
            mean = m.str();
        }
        out << std::left << std::setw(20) << s.problem << std::setw(18) << s.strategy << std::right << std::setw(6)
            << s.stats.runs << std::setw(11) << s.stats.success_count << std::setw(13) << s.stats.generalized_count
            << std::setw(10) << mean << '\n';
    }
    for (const auto& t : summary.tests) {
        out << "\nchi-square on generalized successes, " << t.problem << " (Holm, alpha " << t.report.alpha << ")\n";
        for (const auto& p : t.report.pairs) {
            out << "  " << std::left << std::setw(18) << p.first << std::setw(18) << p.second << std::right
                << " chi2 " << std::setw(8) << std::fixed << std::setprecision(3) << p.statistic << "  p "
                << std::scientific << std::setprecision(3) << p.p_value << "  adjusted " << p.p_adjusted
                << (p.significant ? "  *" : "") << '\n';
            out.unsetf(std::ios::floatfield);
        }
    }
    out.flags(flags);
}

AnalysisResult analyze_logs(const fs::path& input, std::ostream* report, std::optional<fs::path> output)
{
    if (!fs::is_directory(input)) {
        throw UsageError("no such directory: " + input.string());
    }
    std::vector<LoggedRun> runs;
    for (const auto& entry : fs::recursive_directory_iterator(input)) {
        const auto name = entry.path().filename().string();
        if (!entry.is_regular_file() || !name.starts_with("run_") || entry.path().extension() != ".json") {
            continue;
        }
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream buffer;
        buffer << in.rdbuf();
        try {
            runs.push_back(run_from_json(buffer.str()));
        } catch (const ConfigError& e) {
            throw ConfigError(entry.path().string() + ": " + e.what());
        }
    }
    if (runs.empty()) {
        throw UsageError("no run files under " + input.string());
    }
    std::sort(runs.begin(), runs.end(), [](const LoggedRun& a, const LoggedRun& b) {
        return std::tuple(a.problem, strategy_rank(a.strategy), a.strategy, a.run_id) <
               std::tuple(b.problem, strategy_rank(b.strategy), b.strategy, b.run_id);
    });
    std::vector<RunGroup> groups;
    for (auto& r : runs) {
        if (groups.empty() || groups.back().problem != r.problem || groups.back().strategy != r.strategy) {
            groups.push_back({r.problem, r.strategy, {}});
        }
        groups.back().outcomes.push_back(std::move(r.outcome));
    }

    AnalysisResult result{summarize(groups), runs.size()};
    fs::path dir = output.value_or(input / "analysis");
    fs::create_directories(dir);
    write_atomically(dir / "success.csv", summary_csv(result.summary));
    write_atomically(dir / "solution_generation.csv", solution_generation_csv(result.summary));
    write_atomically(dir / "accumulated.csv", accumulated_csv(result.summary));
    write_atomically(dir / "diversity.csv", diversity_csv(result.summary));
    write_atomically(dir / "generalization.csv", generalization_csv(result.summary));
    write_atomically(dir / "chi_square.csv", chi_square_csv(result.summary));
    if (report) {
        *report << result.runs_found << " finished runs under " << input.string() << "\n\n";
        print_summary(*report, result.summary);
        *report << "\nwrote " << dir.string() << '\n';
    }
    return result;
}

} // namespace novlex

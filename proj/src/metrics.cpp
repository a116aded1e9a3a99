#include "novlex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "novlex/errors.hpp"
#include "novlex/selection.hpp"

namespace novlex {

namespace {

struct BehaviorPtrHash {
    std::size_t operator()(const Behavior* b) const noexcept { return hash_behavior(*b); }
};
struct BehaviorPtrEq {
    bool operator()(const Behavior* a, const Behavior* b) const noexcept { return *a == *b; }
};

template <class Range, class Get>
double diversity(const Range& items, Get get)
{
    if (items.empty()) {
        throw UsageError("behavioral_diversity: empty population");
    }
    std::unordered_set<const Behavior*, BehaviorPtrHash, BehaviorPtrEq> distinct;
    distinct.reserve(items.size());
    for (const auto& item : items) {
        distinct.insert(&get(item));
    }
    return static_cast<double>(distinct.size()) / static_cast<double>(items.size());
}

} // namespace

double behavioral_diversity(std::span<const Behavior> behaviors)
{
    return diversity(behaviors, [](const Behavior& b) -> const Behavior& { return b; });
}

double behavioral_diversity(std::span<const Individual> population)
{
    return diversity(population, [](const Individual& i) -> const Behavior& { return i.behavior; });
}

SolutionStats solution_stats(std::span<const RunOutcome> outcomes, std::size_t generations)
{
    SolutionStats s;
    s.runs = outcomes.size();
    if (generations == 0) {
        for (const auto& o : outcomes) {
            generations = std::max(generations, o.per_generation.size());
        }
    }
    s.accumulated.assign(generations, 0);
    double generation_sum = 0.0;
    for (const auto& o : outcomes) {
        if (!o.success || !o.solution_generation) {
            continue;
        }
        ++s.success_count;
        generation_sum += static_cast<double>(*o.solution_generation);
        if (o.generalized) {
            ++s.generalized_count;
            for (std::size_t g = *o.solution_generation; g < generations; ++g) {
                ++s.accumulated[g];
            }
        }
    }
    if (s.success_count > 0) {
        s.mean_solution_generation = generation_sum / static_cast<double>(s.success_count);
    }
    return s;
}

double chi_square_2x2(std::size_t successes_a, std::size_t runs_a, std::size_t successes_b, std::size_t runs_b)
{
    if (successes_a > runs_a || successes_b > runs_b) {
        throw UsageError("chi_square_2x2: successes exceed runs");
    }
    const double a = static_cast<double>(successes_a);
    const double b = static_cast<double>(runs_a - successes_a);
    const double c = static_cast<double>(successes_b);
    const double d = static_cast<double>(runs_b - successes_b);
    const double n = a + b + c + d;
    const double denom = (a + b) * (c + d) * (a + c) * (b + d);
    if (denom == 0.0) {
        return 0.0;
    }
    const double cross = a * d - b * c;
    return n * cross * cross / denom;
}

double chi_square_p_value_1df(double statistic)
{
    if (statistic <= 0.0) {
        return 1.0;
    }
    return std::erfc(std::sqrt(statistic / 2.0));
}

std::vector<double> holm_adjust(std::span<const double> p_values)
{
    const std::size_t m = p_values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return p_values[i] < p_values[j]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (std::size_t rank = 0; rank < m; ++rank) {
        double scaled = std::min(1.0, static_cast<double>(m - rank) * p_values[order[rank]]);
        running = std::max(running, scaled);
        adjusted[order[rank]] = running;
    }
    return adjusted;
}

ChiSquareReport chi_square_pairwise_holm(std::span<const SuccessCount> counts, double alpha)
{
    if (counts.size() < 2) {
        throw UsageError("chi_square_pairwise_holm: need at least two strategies");
    }
    for (const auto& c : counts) {
        if (c.runs == 0) {
            throw UsageError("chi_square_pairwise_holm: " + c.strategy + " has zero runs");
        }
    }
    ChiSquareReport report;
    report.alpha = alpha;
    std::vector<double> raw;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        for (std::size_t j = i + 1; j < counts.size(); ++j) {
            PairwiseTest t;
            t.first = counts[i].strategy;
            t.second = counts[j].strategy;
            t.statistic = chi_square_2x2(counts[i].successes, counts[i].runs, counts[j].successes, counts[j].runs);
            t.p_value = chi_square_p_value_1df(t.statistic);
            raw.push_back(t.p_value);
            report.pairs.push_back(std::move(t));
        }
    }
    auto adjusted = holm_adjust(raw);
    for (std::size_t k = 0; k < report.pairs.size(); ++k) {
        report.pairs[k].p_adjusted = adjusted[k];
        report.pairs[k].significant = adjusted[k] < alpha;
    }
    return report;
}

std::vector<DiversityPoint> mean_diversity_curve(std::span<const RunOutcome> outcomes)
{
    std::size_t generations = 0;
    for (const auto& o : outcomes) {
        generations = std::max(generations, o.per_generation.size());
    }
    std::vector<DiversityPoint> curve(generations);
    std::vector<double> values;
    for (std::size_t g = 0; g < generations; ++g) {
        values.clear();
        for (const auto& o : outcomes) {
            if (g < o.per_generation.size()) {
                values.push_back(o.per_generation[g].behavioral_diversity);
            }
        }
        // Sorted summation keeps the mean independent of run order.
        std::sort(values.begin(), values.end());
        double sum = 0.0;
        for (double v : values) {
            sum += v;
        }
        curve[g] = {sum / static_cast<double>(values.size()), values.size()};
    }
    return curve;
}

ExperimentSummary summarize(std::span<const RunGroup> groups, double alpha)
{
    ExperimentSummary summary;
    std::vector<std::string> problems;
    for (const auto& g : groups) {
        summary.strategies.push_back({g.problem, g.strategy, solution_stats(g.outcomes), mean_diversity_curve(g.outcomes)});
        if (std::find(problems.begin(), problems.end(), g.problem) == problems.end()) {
            problems.push_back(g.problem);
        }
    }
    for (const auto& p : problems) {
        std::vector<SuccessCount> counts;
        for (const auto& s : summary.strategies) {
            if (s.problem == p && s.stats.runs > 0) {
                counts.push_back({s.strategy, s.stats.generalized_count, s.stats.runs});
            }
        }
        if (counts.size() >= 2) {
            summary.tests.push_back({p, chi_square_pairwise_holm(counts, alpha)});
        }
    }
    return summary;
}

} // namespace novlex

#include "novlex/selection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <unordered_map>

namespace novlex {

CaseList error_cases(std::size_t case_count)
{
    CaseList cases;
    cases.reserve(case_count);
    for (std::size_t i = 0; i < case_count; ++i) {
        cases.push_back({CaseRef::Kind::error, static_cast<std::uint32_t>(i)});
    }
    return cases;
}

CaseList error_and_novelty_cases(std::size_t case_count)
{
    CaseList cases = error_cases(case_count);
    for (std::size_t i = 0; i < case_count; ++i) {
        cases.push_back({CaseRef::Kind::novelty, static_cast<std::uint32_t>(i)});
    }
    return cases;
}

void SelectionStrategy::validate() const
{
    bool needs_size = kind == SelectionKind::tournament || kind == SelectionKind::novelty;
    bool needs_k = kind == SelectionKind::novelty;
    if (needs_size != (tournament_size > 0)) {
        throw ConfigError(std::string(selection_name(kind)) +
                          (needs_size ? ": tournament size must be positive" : ": tournament size does not apply"));
    }
    if (needs_k != (k_neighbors > 0)) {
        throw ConfigError(std::string(selection_name(kind)) +
                          (needs_k ? ": k-neighbors must be positive" : ": k-neighbors does not apply"));
    }
}

std::string_view selection_name(SelectionKind kind) noexcept
{
    switch (kind) {
    case SelectionKind::tournament: return "tournament";
    case SelectionKind::lexicase: return "lexicase";
    case SelectionKind::novelty: return "novelty";
    case SelectionKind::novelty_lexicase: return "novelty-lexicase";
    }
    return "?";
}

SelectionStrategy parse_selection(std::string_view name)
{
    if (name == "tournament") return SelectionStrategy::tournament();
    if (name == "lexicase") return SelectionStrategy::lexicase();
    if (name == "novelty") return SelectionStrategy::novelty();
    if (name == "novelty-lexicase") return SelectionStrategy::novelty_lexicase();
    throw ConfigError("unknown selection '" + std::string(name) + "'");
}

namespace {

// Shared tournament: `better(a, b)` is true when a strictly beats b.
template <class Better, class Same>
std::size_t tournament(std::size_t population_size, std::size_t size, Rng& rng, Better better, Same same)
{
    if (population_size == 0) {
        throw UsageError("tournament: empty population");
    }
    if (size == 0) {
        throw UsageError("tournament: size must be positive");
    }
    std::vector<std::size_t> entrants(size);
    for (auto& e : entrants) {
        e = uniform_index(rng, population_size);
    }
    std::size_t best = entrants.front();
    for (auto e : entrants) {
        if (better(e, best)) {
            best = e;
        }
    }
    std::vector<std::size_t> tied;
    for (auto e : entrants) {
        if (same(e, best)) {
            tied.push_back(e);
        }
    }
    std::sort(tied.begin(), tied.end());
    tied.erase(std::unique(tied.begin(), tied.end()), tied.end());
    return tied.size() == 1 ? tied.front() : tied[uniform_index(rng, tied.size())];
}

} // namespace

std::size_t tournament_select(std::span<const double> total_errors, std::size_t size, Rng& rng)
{
    return tournament(
        total_errors.size(), size, rng, [&](std::size_t a, std::size_t b) { return total_errors[a] < total_errors[b]; },
        [&](std::size_t a, std::size_t b) { return total_errors[a] == total_errors[b]; });
}

std::size_t novelty_search_select(std::span<const double> novelties, std::size_t size, Rng& rng)
{
    return tournament(
        novelties.size(), size, rng, [&](std::size_t a, std::size_t b) { return novelties[a] > novelties[b]; },
        [&](std::size_t a, std::size_t b) { return novelties[a] == novelties[b]; });
}

std::size_t lexicase_select(const ScoreMatrix& errors, Rng& rng)
{
    auto cases = error_cases(errors.cols());
    return lexicase_select(errors.rows(), cases, [&](std::size_t i, CaseRef c) { return errors(i, c.index); }, rng);
}

std::size_t novelty_lexicase_select(const ScoreMatrix& errors, const NoveltyScores& counts, Rng& rng)
{
    if (errors.rows() != counts.rows() || errors.cols() != counts.cols()) {
        throw UsageError("novelty_lexicase_select: error and novelty matrices differ in shape");
    }
    auto cases = error_and_novelty_cases(errors.cols());
    return lexicase_select(
        errors.rows(), cases,
        [&](std::size_t i, CaseRef c) {
            return c.kind == CaseRef::Kind::error ? errors(i, c.index) : static_cast<double>(counts(i, c.index));
        },
        rng);
}

// ---- hashing ------------------------------------------------------------------

namespace {

std::size_t combine(std::size_t seed, std::size_t h) noexcept
{
    return static_cast<std::size_t>(mix64(seed ^ h));
}

} // namespace

std::size_t hash_output(const Output& o) noexcept
{
    std::size_t h = o.index();
    std::visit(
        [&]<class T>(const T& x) {
            if constexpr (std::is_same_v<T, NoOutput>) {
            } else if constexpr (std::is_same_v<T, double>) {
                // +0.0 == -0.0, so both must hash alike.
                h = combine(h, x == 0.0 ? 0 : std::bit_cast<std::uint64_t>(x));
            } else if constexpr (std::is_same_v<T, IntVector>) {
                for (auto v : x) {
                    h = combine(h, static_cast<std::size_t>(v));
                }
                h = combine(h, x.size());
            } else {
                h = combine(h, std::hash<T>{}(x));
            }
        },
        o);
    return h;
}

std::size_t hash_case_output(const CaseOutput& o) noexcept
{
    std::size_t h = o.size();
    for (const auto& x : o) {
        h = combine(h, hash_output(x));
    }
    return h;
}

std::size_t hash_behavior(const Behavior& b) noexcept
{
    std::size_t h = b.size();
    for (const auto& x : b) {
        h = combine(h, hash_case_output(x));
    }
    return h;
}

// ---- novelty ----------------------------------------------------------------------

namespace {

struct CaseOutputPtrHash {
    std::size_t operator()(const CaseOutput* o) const noexcept { return hash_case_output(*o); }
};
struct CaseOutputPtrEq {
    bool operator()(const CaseOutput* a, const CaseOutput* b) const noexcept { return *a == *b; }
};

void require_case_count(std::span<const Behavior> behaviors, std::size_t cases)
{
    for (const auto& b : behaviors) {
        if (b.size() != cases) {
            throw UsageError("behaviors differ in length");
        }
    }
}

} // namespace

NoveltyScores case_novelty_scores(std::span<const Behavior> population, std::span<const Behavior> archive)
{
    if (population.empty()) {
        return {};
    }
    const std::size_t cases = population.front().size();
    require_case_count(population, cases);
    require_case_count(archive, cases);

    NoveltyScores counts(population.size(), cases);
    std::unordered_map<const CaseOutput*, std::uint32_t, CaseOutputPtrHash, CaseOutputPtrEq> tally;
    tally.reserve(population.size() + archive.size());
    for (std::size_t c = 0; c < cases; ++c) {
        tally.clear();
        for (const auto& b : population) {
            ++tally[&b[c]];
        }
        for (const auto& b : archive) {
            ++tally[&b[c]];
        }
        for (std::size_t i = 0; i < population.size(); ++i) {
            counts(i, c) = tally.find(&population[i][c])->second;
        }
    }
    return counts;
}

namespace {

double numeric(const Output& o)
{
    if (auto* i = std::get_if<std::int64_t>(&o)) {
        return static_cast<double>(*i);
    }
    if (auto* d = std::get_if<double>(&o)) {
        return *d;
    }
    if (auto* b = std::get_if<bool>(&o)) {
        return *b ? 1.0 : 0.0;
    }
    return 0.0;
}

bool is_numeric(const Output& o)
{
    return std::holds_alternative<std::int64_t>(o) || std::holds_alternative<double>(o) ||
           std::holds_alternative<bool>(o);
}

double manhattan_component(const Output& a, const Output& b)
{
    bool a_none = std::holds_alternative<NoOutput>(a);
    bool b_none = std::holds_alternative<NoOutput>(b);
    if (a_none || b_none) {
        return a_none && b_none ? 0.0 : no_output_penalty;
    }
    if (is_numeric(a) && is_numeric(b)) {
        return std::abs(numeric(a) - numeric(b));
    }
    return a == b ? 0.0 : 1.0;
}

} // namespace

double behavior_distance(const Behavior& a, const Behavior& b, DistanceKind kind)
{
    if (kind == DistanceKind::unsupported) {
        throw StrategyUnavailable("no behavior distance is defined for this output type");
    }
    if (a.size() != b.size()) {
        throw UsageError("behavior_distance: length mismatch");
    }
    double d = 0.0;
    if (kind == DistanceKind::hamming_equality) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            d += a[i] == b[i] ? 0.0 : 1.0;
        }
        return d;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) {
            throw UsageError("behavior_distance: output arity mismatch");
        }
        for (std::size_t k = 0; k < a[i].size(); ++k) {
            d += manhattan_component(a[i][k], b[i][k]);
        }
    }
    return d;
}

double knn_novelty(std::size_t index, std::span<const Behavior> population, std::span<const Behavior> archive,
                   std::size_t k, DistanceKind kind)
{
    if (kind == DistanceKind::unsupported) {
        throw StrategyUnavailable("novelty search needs a behavior distance");
    }
    if (k == 0) {
        throw UsageError("knn_novelty: k must be positive");
    }
    if (index >= population.size() || population.size() + archive.size() < 2) {
        throw UsageError("knn_novelty: needs at least one other behavior");
    }
    std::vector<double> distances;
    distances.reserve(population.size() + archive.size() - 1);
    for (std::size_t j = 0; j < population.size(); ++j) {
        if (j != index) {
            distances.push_back(behavior_distance(population[index], population[j], kind));
        }
    }
    for (const auto& b : archive) {
        distances.push_back(behavior_distance(population[index], b, kind));
    }
    auto n = std::min(k, distances.size());
    std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(n - 1), distances.end());
    // After nth_element the n smallest occupy [0, n); sum them in sorted order
    // so the result does not depend on the partition's internal arrangement.
    std::sort(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(n));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += distances[i];
    }
    return sum / static_cast<double>(n);
}

std::vector<double> knn_novelties(std::span<const Behavior> population, std::span<const Behavior> archive,
                                  std::size_t k, DistanceKind kind)
{
    std::vector<double> out(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
        out[i] = knn_novelty(i, population, archive, k, kind);
    }
    return out;
}

std::size_t archive_update(Archive& archive, std::span<const Behavior> population, Rng& rng)
{
    if (population.empty()) {
        throw UsageError("archive_update: empty population");
    }
    auto i = uniform_index(rng, population.size());
    archive.members.push_back(population[i]);
    return i;
}

} // namespace novlex

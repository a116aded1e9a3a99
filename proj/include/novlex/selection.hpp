#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "novlex/errors.hpp"
#include "novlex/problems.hpp"
#include "novlex/random.hpp"

namespace novlex {

/// Dense row-major matrix; rows are individuals, columns are training cases.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using ScoreMatrix = Matrix<double>;

/// Per individual and case: how many members of population ∪ archive produce
/// the same output on that case (self included, so every count is ≥ 1).
using NoveltyScores = Matrix<std::uint32_t>;

struct CaseRef {
    enum class Kind : std::uint8_t { error, novelty };
    Kind kind = Kind::error;
    std::uint32_t index = 0;

    friend bool operator==(const CaseRef&, const CaseRef&) = default;
};

using CaseList = std::vector<CaseRef>;

/// One ERROR entry per case.
CaseList error_cases(std::size_t case_count);
/// One ERROR and one NOVELTY entry per case.
CaseList error_and_novelty_cases(std::size_t case_count);

enum class SelectionKind : std::uint8_t { tournament, lexicase, novelty, novelty_lexicase };

struct SelectionStrategy {
    SelectionKind kind = SelectionKind::lexicase;
    std::size_t tournament_size = 0;  // tournament and novelty only
    std::size_t k_neighbors = 0;      // novelty only

    static SelectionStrategy tournament(std::size_t size = 7) { return {SelectionKind::tournament, size, 0}; }
    static SelectionStrategy lexicase() { return {SelectionKind::lexicase, 0, 0}; }
    static SelectionStrategy novelty(std::size_t size = 2, std::size_t k = 25) { return {SelectionKind::novelty, size, k}; }
    static SelectionStrategy novelty_lexicase() { return {SelectionKind::novelty_lexicase, 0, 0}; }

    bool uses_archive() const noexcept
    {
        return kind == SelectionKind::novelty || kind == SelectionKind::novelty_lexicase;
    }

    /// Throws ConfigError when a parameter is missing or present without use.
    void validate() const;

    friend bool operator==(const SelectionStrategy&, const SelectionStrategy&) = default;
};

std::string_view selection_name(SelectionKind kind) noexcept;
/// Accepts tournament, lexicase, novelty, novelty-lexicase. Throws ConfigError.
SelectionStrategy parse_selection(std::string_view name);

/// Draws `size` entrants uniformly with replacement and returns the index with
/// the lowest total error; ties among distinct entrants are broken uniformly.
std::size_t tournament_select(std::span<const double> total_errors, std::size_t size, Rng& rng);

/// Lexicase selection over an arbitrary case list. `score(individual, case_ref)`
/// is minimized. Cases are consumed in uniformly random order; survivors are
/// those with exactly the best score. An empty case list selects uniformly.
template <class Score>
std::size_t lexicase_select(std::size_t population_size, std::span<const CaseRef> cases, Score&& score, Rng& rng)
{
    if (population_size == 0) {
        throw UsageError("lexicase_select: empty population");
    }
    std::vector<std::size_t> candidates(population_size);
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    std::vector<CaseRef> order(cases.begin(), cases.end());
    std::vector<std::size_t> survivors;
    survivors.reserve(population_size);

    for (std::size_t remaining = order.size(); remaining > 0 && candidates.size() > 1;) {
        // Incremental Fisher-Yates: the next case is uniform over the unused ones.
        std::swap(order[uniform_index(rng, remaining)], order[remaining - 1]);
        const CaseRef c = order[--remaining];

        auto best = score(candidates.front(), c);
        for (auto i : candidates) {
            auto s = score(i, c);
            if (s < best) {
                best = s;
            }
        }
        survivors.clear();
        for (auto i : candidates) {
            if (score(i, c) == best) {
                survivors.push_back(i);
            }
        }
        candidates.swap(survivors);
    }
    if (candidates.size() == 1) {
        return candidates.front();
    }
    return candidates[uniform_index(rng, candidates.size())];
}

/// Plain lexicase on an error matrix.
std::size_t lexicase_select(const ScoreMatrix& errors, Rng& rng);

/// Lexicase over the doubled case list: ERROR(i) reads `errors`, NOVELTY(i)
/// reads `counts`. Both matrices must have the same shape.
std::size_t novelty_lexicase_select(const ScoreMatrix& errors, const NoveltyScores& counts, Rng& rng);

NoveltyScores case_novelty_scores(std::span<const Behavior> population, std::span<const Behavior> archive);

/// Throws StrategyUnavailable for DistanceKind::unsupported and UsageError on
/// length mismatch.
double behavior_distance(const Behavior& a, const Behavior& b, DistanceKind kind);

/// Mean distance from population[index] to its k nearest others in
/// population ∪ archive (itself excluded; all others when fewer than k).
double knn_novelty(std::size_t index, std::span<const Behavior> population, std::span<const Behavior> archive,
                   std::size_t k, DistanceKind kind);

/// knn_novelty for every member of the population.
std::vector<double> knn_novelties(std::span<const Behavior> population, std::span<const Behavior> archive,
                                  std::size_t k, DistanceKind kind);

/// Tournament that returns the most novel entrant.
std::size_t novelty_search_select(std::span<const double> novelties, std::size_t size, Rng& rng);

struct Archive {
    std::vector<Behavior> members;
};

/// Appends a uniformly chosen population member; returns its index.
std::size_t archive_update(Archive& archive, std::span<const Behavior> population, Rng& rng);

/// Equality-consistent hashes used for distinctness counting.
std::size_t hash_output(const Output& o) noexcept;
std::size_t hash_case_output(const CaseOutput& o) noexcept;
std::size_t hash_behavior(const Behavior& b) noexcept;

} // namespace novlex

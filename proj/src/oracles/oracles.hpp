#pragma once

// Brute-force reference computations. They share no code with the library
// routines they check.

#include <cstdint>
#include <vector>

#include "novlex/problems.hpp"

namespace novlex::oracle {

/// scores[i][c]: individual i on case c (lower is better).
using Table = std::vector<std::vector<double>>;

/// Exact lexicase selection probabilities: every case ordering is equally
/// likely and leftover ties are broken uniformly.
std::vector<double> lexicase_distribution(const Table& scores);

/// Exact tournament probabilities (entrants with replacement, lowest value
/// wins, ties uniform over distinct tied individuals) by enumerating every
/// entrant tuple.
std::vector<double> tournament_distribution(const std::vector<double>& values, std::size_t size);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

/// counts[i][c] = members of population ∪ archive whose output on c equals
/// population[i]'s, by pairwise comparison.
std::vector<std::vector<std::uint32_t>> novelty_counts(const std::vector<Behavior>& population,
                                                       const std::vector<Behavior>& archive);

/// Mean of the k smallest distances from population[index] to every other
/// member of population ∪ archive, from a full sort.
double knn_mean(std::size_t index, const std::vector<Behavior>& population, const std::vector<Behavior>& archive,
                std::size_t k, DistanceKind kind);

/// Distinct behaviors by pairwise comparison.
std::size_t distinct_behaviors(const std::vector<Behavior>& behaviors);

/// Pearson statistic from observed and expected cell counts.
double chi_square_cells(double a, double b, double c, double d);

/// Holm adjustment straight from its definition:
/// adj(i) = max over j <= rank(i) of min(1, (m - j) * p_(j)).
std::vector<double> holm(const std::vector<double>& p);

} // namespace novlex::oracle

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace novlex::oracle {

struct SuiteResult {
    int criterion = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Empirical lexicase frequencies vs exact ordering enumeration.
SuiteResult lexicase_suite(std::uint64_t seed, std::size_t matrices = 50, std::size_t selections = 100000,
                           double tolerance = 0.02);
/// Novelty-lexicase with tied novelty (or tied errors) vs plain lexicase.
SuiteResult novelty_lexicase_suite(std::uint64_t seed, std::size_t matrices = 50, std::size_t selections = 100000,
                                   double tolerance = 0.02);
/// Per-case novelty counts and k-NN novelty vs brute force.
SuiteResult novelty_knn_suite(std::uint64_t seed, std::size_t populations = 1000);
/// Diversity on populations built with a known number of distinct behaviors.
SuiteResult diversity_suite(std::uint64_t seed, std::size_t constructions = 100);
/// Chi-square and Holm worked examples plus table and oracle agreement.
SuiteResult statistics_suite(std::uint64_t seed);

std::vector<SuiteResult> run_selftest(std::uint64_t seed);

} // namespace novlex::oracle

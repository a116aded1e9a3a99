#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "novlex/metrics.hpp"
#include "novlex/random.hpp"
#include "novlex/selection.hpp"
#include "oracles.hpp"

namespace novlex::oracle {

namespace {

struct RandomMatrix {
    ScoreMatrix scores;
    Table table;
};

RandomMatrix random_matrix(Rng& rng)
{
    std::size_t rows = 1 + uniform_index(rng, 6);
    std::size_t cols = 1 + uniform_index(rng, 4);
    RandomMatrix m{ScoreMatrix(rows, cols), Table(rows, std::vector<double>(cols))};
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            double v = static_cast<double>(uniform_index(rng, 3));
            m.scores(r, c) = v;
            m.table[r][c] = v;
        }
    }
    return m;
}

template <class Select>
std::vector<double> frequencies(std::size_t rows, std::size_t selections, Rng& rng, Select select)
{
    std::vector<double> f(rows, 0.0);
    for (std::size_t s = 0; s < selections; ++s) {
        f[select(rng)] += 1.0;
    }
    for (auto& x : f) {
        x /= static_cast<double>(selections);
    }
    return f;
}

std::string worst_line(double worst, double tolerance, std::size_t failures, std::size_t total)
{
    std::ostringstream out;
    out << "max TV " << worst << " (tolerance " << tolerance << "), " << failures << "/" << total
        << " comparisons over tolerance";
    return out.str();
}

Output random_output(Rng& rng, int slot_type)
{
    if (coin(rng, 0.1)) {
        return NoOutput{};
    }
    switch (slot_type) {
    case 0: return static_cast<std::int64_t>(uniform_index(rng, 7)) - 3;
    case 1: return std::vector<double>{-2.25, 0.5, 1.5, 3.0}[uniform_index(rng, 4)];
    case 2: return coin(rng, 0.5);
    case 3: return std::string(uniform_index(rng, 3), 'a');
    default: return IntVector(uniform_index(rng, 3), 1);
    }
}

} // namespace

SuiteResult lexicase_suite(std::uint64_t seed, std::size_t matrices, std::size_t selections, double tolerance)
{
    SuiteResult r{1, "lexicase oracle equivalence", true, {}};
    auto gen = derive_stream({seed, 101});
    double worst = 0.0;
    std::size_t failures = 0;
    for (std::size_t m = 0; m < matrices; ++m) {
        auto mat = random_matrix(gen);
        auto exact = lexicase_distribution(mat.table);
        auto rng = derive_stream({seed, 102, m});
        auto seen = frequencies(mat.scores.rows(), selections, rng,
                                [&](Rng& g) { return lexicase_select(mat.scores, g); });
        double tv = total_variation(exact, seen);
        worst = std::max(worst, tv);
        failures += tv > tolerance ? 1 : 0;
    }
    r.passed = failures == 0;
    r.detail = worst_line(worst, tolerance, failures, matrices);
    return r;
}

SuiteResult novelty_lexicase_suite(std::uint64_t seed, std::size_t matrices, std::size_t selections, double tolerance)
{
    SuiteResult r{2, "novelty-lexicase reduction", true, {}};
    // Same matrix stream as lexicase_suite.
    auto gen = derive_stream({seed, 101});
    double worst = 0.0;
    std::size_t failures = 0;
    for (std::size_t m = 0; m < matrices; ++m) {
        auto mat = random_matrix(gen);
        const auto rows = mat.scores.rows();
        const auto cols = mat.scores.cols();

        NoveltyScores tied_counts(rows, cols, 3);
        auto rng = derive_stream({seed, 103, m});
        auto seen = frequencies(rows, selections, rng,
                                [&](Rng& g) { return novelty_lexicase_select(mat.scores, tied_counts, g); });
        double tv = total_variation(lexicase_distribution(mat.table), seen);

        NoveltyScores counts(rows, cols);
        Table count_table(rows, std::vector<double>(cols));
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t c = 0; c < cols; ++c) {
                counts(i, c) = static_cast<std::uint32_t>(mat.table[i][c]) + 1;
                count_table[i][c] = mat.table[i][c] + 1;
            }
        }
        ScoreMatrix tied_errors(rows, cols, 5.0);
        auto rng2 = derive_stream({seed, 104, m});
        auto seen2 = frequencies(rows, selections, rng2,
                                 [&](Rng& g) { return novelty_lexicase_select(tied_errors, counts, g); });
        double tv2 = total_variation(lexicase_distribution(count_table), seen2);

        worst = std::max({worst, tv, tv2});
        failures += (tv > tolerance ? 1 : 0) + (tv2 > tolerance ? 1 : 0);
    }
    r.passed = failures == 0;
    r.detail = worst_line(worst, tolerance, failures, 2 * matrices);
    return r;
}

SuiteResult novelty_knn_suite(std::uint64_t seed, std::size_t populations)
{
    SuiteResult r{3, "novelty counts and k-NN", true, {}};
    auto rng = derive_stream({seed, 105});
    std::size_t count_mismatches = 0;
    std::size_t knn_mismatches = 0;
    std::size_t knn_checks = 0;
    double worst = 0.0;
    for (std::size_t p = 0; p < populations; ++p) {
        const std::size_t pop_size = 1 + uniform_index(rng, 8);
        const std::size_t archive_size = uniform_index(rng, 5);
        const std::size_t cases = 1 + uniform_index(rng, 5);
        const std::size_t arity = 1 + uniform_index(rng, 2);
        const bool manhattan = coin(rng, 0.5);
        std::vector<int> slot_types(arity);
        for (auto& t : slot_types) {
            t = manhattan ? static_cast<int>(uniform_index(rng, 3)) : static_cast<int>(uniform_index(rng, 5));
        }
        auto make = [&] {
            Behavior b(cases);
            for (auto& c : b) {
                for (auto t : slot_types) {
                    c.push_back(random_output(rng, t));
                }
            }
            return b;
        };
        std::vector<Behavior> pop;
        std::vector<Behavior> archive;
        for (std::size_t i = 0; i < pop_size; ++i) {
            // Repeat earlier members now and then so counts above 1 occur.
            pop.push_back(i > 0 && coin(rng, 0.3) ? pop[uniform_index(rng, i)] : make());
        }
        for (std::size_t i = 0; i < archive_size; ++i) {
            archive.push_back(coin(rng, 0.3) ? pop[uniform_index(rng, pop_size)] : make());
        }

        auto got = case_novelty_scores(pop, archive);
        auto want = novelty_counts(pop, archive);
        for (std::size_t i = 0; i < pop_size; ++i) {
            for (std::size_t c = 0; c < cases; ++c) {
                count_mismatches += got(i, c) == want[i][c] ? 0 : 1;
            }
        }

        if (pop_size + archive_size < 2) {
            continue;
        }
        const auto kind = manhattan ? DistanceKind::manhattan : DistanceKind::hamming_equality;
        const std::size_t k = 1 + uniform_index(rng, 10);
        auto all = knn_novelties(pop, archive, k, kind);
        for (std::size_t i = 0; i < pop_size; ++i) {
            double expected = knn_mean(i, pop, archive, k, kind);
            double diff = std::abs(all[i] - expected);
            double one = std::abs(knn_novelty(i, pop, archive, k, kind) - expected);
            double scale = std::max(1.0, std::abs(expected));
            worst = std::max({worst, diff / scale, one / scale});
            knn_mismatches += (diff > 1e-9 * scale || one > 1e-9 * scale) ? 1 : 0;
            ++knn_checks;
        }
    }
    r.passed = count_mismatches == 0 && knn_mismatches == 0;
    std::ostringstream out;
    out << populations << " populations, " << count_mismatches << " count mismatches, " << knn_mismatches << "/"
        << knn_checks << " k-NN mismatches (max relative error " << worst << ")";
    r.detail = out.str();
    return r;
}

SuiteResult diversity_suite(std::uint64_t seed, std::size_t constructions)
{
    SuiteResult r{4, "behavioral diversity exactness", true, {}};
    auto rng = derive_stream({seed, 106});
    constexpr double fractions[] = {0.25, 0.5, 1.0};
    std::size_t wrong = 0;
    for (std::size_t t = 0; t < constructions; ++t) {
        const std::size_t m = 1 + uniform_index(rng, 50);
        const std::size_t n = 4 * m;
        const double f = fractions[t % 3];
        const auto distinct = static_cast<std::size_t>(f * static_cast<double>(n));
        const std::size_t cases = 1 + uniform_index(rng, 6);

        std::vector<Behavior> unique;
        for (std::size_t d = 0; d < distinct; ++d) {
            Behavior b(cases);
            // The first case carries the index so every behavior differs.
            b[0].push_back(static_cast<std::int64_t>(d));
            for (std::size_t c = 1; c < cases; ++c) {
                b[c].push_back(coin(rng, 0.5));
            }
            unique.push_back(std::move(b));
        }
        std::vector<Behavior> pop = unique;
        while (pop.size() < n) {
            pop.push_back(unique[uniform_index(rng, distinct)]);
        }
        std::shuffle(pop.begin(), pop.end(), rng);

        bool ok = behavioral_diversity(pop) == f && distinct_behaviors(pop) == distinct;
        wrong += ok ? 0 : 1;
    }
    r.passed = wrong == 0;
    r.detail = std::to_string(constructions - wrong) + "/" + std::to_string(constructions) +
               " constructions exact (fractions 0.25, 0.5, 1.0)";
    return r;
}

SuiteResult statistics_suite(std::uint64_t seed)
{
    SuiteResult r{8, "chi-square and Holm", true, {}};
    std::vector<std::string> failures;
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) {
            failures.push_back(what);
        }
    };

    std::vector<SuccessCount> equal{{"a", 50, 100}, {"b", 50, 100}};
    auto eq = chi_square_pairwise_holm(equal);
    check(eq.pairs.size() == 1 && eq.pairs[0].statistic == 0.0 && !eq.pairs[0].significant,
          "equal counts should give statistic 0, not significant");

    std::vector<SuccessCount> extreme{{"a", 100, 100}, {"b", 0, 100}};
    auto ex = chi_square_pairwise_holm(extreme);
    check(ex.pairs.size() == 1 && std::abs(ex.pairs[0].statistic - 200.0) < 1e-9,
          "100/100 vs 0/100 should give statistic n = 200");
    check(ex.pairs.size() == 1 && ex.pairs[0].p_value < 1e-10 && ex.pairs[0].significant,
          "100/100 vs 0/100 should give p < 1e-10");

    std::vector<double> raw{0.01, 0.02, 0.04};
    auto adj = holm_adjust(raw);
    const double want[] = {0.03, 0.04, 0.04};
    for (std::size_t i = 0; i < 3; ++i) {
        check(std::abs(adj[i] - want[i]) < 1e-12, "Holm {0.01, 0.02, 0.04} should give {0.03, 0.04, 0.04}");
    }

    // Upper-tail critical values of chi-square with one degree of freedom.
    const std::pair<double, double> table[] = {{2.706, 0.10}, {3.841, 0.05}, {6.635, 0.01}, {10.828, 0.001}};
    for (auto [x, p] : table) {
        check(std::abs(chi_square_p_value_1df(x) - p) < 2e-3 * p, "p-value table mismatch");
    }

    auto rng = derive_stream({seed, 107});
    for (int t = 0; t < 1000; ++t) {
        std::size_t na = 1 + uniform_index(rng, 100);
        std::size_t nb = 1 + uniform_index(rng, 100);
        std::size_t sa = uniform_index(rng, na + 1);
        std::size_t sb = uniform_index(rng, nb + 1);
        double got = chi_square_2x2(sa, na, sb, nb);
        double expected = chi_square_cells(static_cast<double>(sa), static_cast<double>(na - sa),
                                           static_cast<double>(sb), static_cast<double>(nb - sb));
        if (std::abs(got - expected) > 1e-9 * std::max(1.0, expected)) {
            check(false, "chi-square disagrees with the cell-by-cell oracle");
            break;
        }
        std::vector<double> ps(1 + uniform_index(rng, 8));
        for (auto& p : ps) {
            p = std::uniform_real_distribution<double>(0.0, 0.2)(rng);
        }
        auto a = holm_adjust(ps);
        auto b = holm(ps);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (std::abs(a[i] - b[i]) > 1e-15) {
                check(false, "Holm disagrees with its definition");
                break;
            }
        }
    }

    r.passed = failures.empty();
    r.detail = failures.empty() ? "worked examples, table values and 1000 random tables agree" : failures.front();
    return r;
}

std::vector<SuiteResult> run_selftest(std::uint64_t seed)
{
    return {lexicase_suite(seed), novelty_lexicase_suite(seed), novelty_knn_suite(seed), diversity_suite(seed),
            statistics_suite(seed)};
}

} // namespace novlex::oracle

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace novlex::oracle {

std::vector<double> lexicase_distribution(const Table& scores)
{
    const std::size_t n = scores.size();
    const std::size_t cases = n == 0 ? 0 : scores.front().size();
    std::vector<double> p(n, 0.0);
    std::vector<std::size_t> order(cases);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t orderings = 0;
    do {
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (auto c : order) {
            double best = scores[pool.front()][c];
            for (auto i : pool) {
                best = std::min(best, scores[i][c]);
            }
            std::erase_if(pool, [&](std::size_t i) { return scores[i][c] != best; });
        }
        for (auto i : pool) {
            p[i] += 1.0 / static_cast<double>(pool.size());
        }
        ++orderings;
    } while (std::next_permutation(order.begin(), order.end()));
    for (auto& x : p) {
        x /= static_cast<double>(orderings);
    }
    return p;
}

std::vector<double> tournament_distribution(const std::vector<double>& values, std::size_t size)
{
    const std::size_t n = values.size();
    std::vector<double> p(n, 0.0);
    std::vector<std::size_t> entrants(size, 0);
    std::size_t tuples = 0;
    while (true) {
        double best = values[entrants.front()];
        for (auto e : entrants) {
            best = std::min(best, values[e]);
        }
        std::vector<bool> tied(n, false);
        for (auto e : entrants) {
            tied[e] = values[e] == best;
        }
        auto count = static_cast<double>(std::count(tied.begin(), tied.end(), true));
        for (std::size_t i = 0; i < n; ++i) {
            if (tied[i]) {
                p[i] += 1.0 / count;
            }
        }
        ++tuples;
        std::size_t pos = 0;
        while (pos < size && ++entrants[pos] == n) {
            entrants[pos++] = 0;
        }
        if (pos == size) {
            break;
        }
    }
    for (auto& x : p) {
        x /= static_cast<double>(tuples);
    }
    return p;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        sum += std::abs(p[i] - q[i]);
    }
    return sum / 2.0;
}

std::vector<std::vector<std::uint32_t>> novelty_counts(const std::vector<Behavior>& population,
                                                       const std::vector<Behavior>& archive)
{
    std::vector<const Behavior*> everyone;
    for (const auto& b : population) {
        everyone.push_back(&b);
    }
    for (const auto& b : archive) {
        everyone.push_back(&b);
    }
    std::vector<std::vector<std::uint32_t>> counts(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
        for (std::size_t c = 0; c < population[i].size(); ++c) {
            std::uint32_t same = 0;
            for (const auto* other : everyone) {
                same += (*other)[c] == population[i][c] ? 1 : 0;
            }
            counts[i].push_back(same);
        }
    }
    return counts;
}

namespace {

double as_number(const Output& o)
{
    switch (o.index()) {
    case 1: return static_cast<double>(std::get<std::int64_t>(o));
    case 2: return std::get<double>(o);
    case 3: return std::get<bool>(o) ? 1.0 : 0.0;
    default: return std::nan("");
    }
}

double distance(const Behavior& a, const Behavior& b, DistanceKind kind)
{
    double d = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        if (kind == DistanceKind::hamming_equality) {
            if (!(a[c] == b[c])) {
                d += 1.0;
            }
            continue;
        }
        for (std::size_t k = 0; k < a[c].size(); ++k) {
            bool x_missing = a[c][k].index() == 0;
            bool y_missing = b[c][k].index() == 0;
            if (x_missing && y_missing) {
                continue;
            }
            if (x_missing || y_missing) {
                d += no_output_penalty;
                continue;
            }
            double x = as_number(a[c][k]);
            double y = as_number(b[c][k]);
            if (std::isnan(x) || std::isnan(y)) {
                d += a[c][k] == b[c][k] ? 0.0 : 1.0;
            } else {
                d += x > y ? x - y : y - x;
            }
        }
    }
    return d;
}

} // namespace

double knn_mean(std::size_t index, const std::vector<Behavior>& population, const std::vector<Behavior>& archive,
                std::size_t k, DistanceKind kind)
{
    std::vector<double> all;
    for (std::size_t j = 0; j < population.size(); ++j) {
        if (j != index) {
            all.push_back(distance(population[index], population[j], kind));
        }
    }
    for (const auto& b : archive) {
        all.push_back(distance(population[index], b, kind));
    }
    std::sort(all.begin(), all.end());
    std::size_t n = std::min(k, all.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += all[i];
    }
    return sum / static_cast<double>(n);
}

std::size_t distinct_behaviors(const std::vector<Behavior>& behaviors)
{
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < behaviors.size(); ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < i && !seen; ++j) {
            seen = behaviors[j] == behaviors[i];
        }
        distinct += seen ? 0 : 1;
    }
    return distinct;
}

double chi_square_cells(double a, double b, double c, double d)
{
    const double n = a + b + c + d;
    const double observed[2][2] = {{a, b}, {c, d}};
    const double rows[2] = {a + b, c + d};
    const double cols[2] = {a + c, b + d};
    double stat = 0.0;
    for (int r = 0; r < 2; ++r) {
        for (int k = 0; k < 2; ++k) {
            double expected = rows[r] * cols[k] / n;
            if (expected > 0.0) {
                double diff = observed[r][k] - expected;
                stat += diff * diff / expected;
            }
        }
    }
    return stat;
}

std::vector<double> holm(const std::vector<double>& p)
{
    const std::size_t m = p.size();
    std::vector<std::size_t> rank(m);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t x, std::size_t y) { return p[x] < p[y]; });
    std::vector<double> adjusted(m);
    for (std::size_t i = 0; i < m; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            worst = std::max(worst, std::min(1.0, static_cast<double>(m - j) * p[rank[j]]));
        }
        adjusted[rank[i]] = worst;
    }
    return adjusted;
}

} // namespace novlex::oracle

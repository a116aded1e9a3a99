#include "novlex/genome.hpp"

#include <cmath>

#include "novlex/errors.hpp"

namespace novlex {

namespace {

char visible_char(Rng& rng)
{
    return static_cast<char>(std::uniform_int_distribution<int>(32, 126)(rng));
}

} // namespace

Value random_erc(Erc kind, Rng& rng)
{
    switch (kind) {
    case Erc::integer: return std::uniform_int_distribution<std::int64_t>(-100, 100)(rng);
    case Erc::floating: {
        double x = std::uniform_real_distribution<double>(-100.0, 100.0)(rng);
        return std::round(x * 1e4) / 1e4;
    }
    case Erc::boolean: return std::bernoulli_distribution(0.5)(rng);
    case Erc::character: return std::string(1, visible_char(rng));
    case Erc::string: {
        auto len = std::uniform_int_distribution<int>(0, 10)(rng);
        std::string s;
        for (int i = 0; i < len; ++i) {
            s += visible_char(rng);
        }
        return s;
    }
    }
    return std::int64_t{0};
}

std::uint32_t random_close_count(Rng& rng)
{
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    std::uint32_t k = 0;
    double cumulative = close_count_distribution[0];
    while (u >= cumulative && k + 1 < close_count_distribution.size()) {
        cumulative += close_count_distribution[++k];
    }
    return k;
}

Gene random_gene(const AtomSet& atoms, Rng& rng)
{
    auto i = uniform_index(rng, atoms.size());
    Gene g;
    if (i < atoms.instructions.size()) {
        g.payload = atoms.instructions[i];
    } else if ((i -= atoms.instructions.size()) < atoms.ercs.size()) {
        g.payload = random_erc(atoms.ercs[i], rng);
    } else {
        g.payload = atoms.constants[i - atoms.ercs.size()];
    }
    g.close_count = random_close_count(rng);
    return g;
}

Genome random_genome(Rng& rng, const ExecutionLimits& limits, const AtomSet& atoms)
{
    if (atoms.instructions.empty()) {
        throw ConfigError("random_genome: empty instruction set");
    }
    limits.validate();
    auto len = std::uniform_int_distribution<std::size_t>(1, limits.max_initial_genome_size)(rng);
    Genome genome;
    genome.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
        genome.push_back(random_gene(atoms, rng));
    }
    return genome;
}

} // namespace novlex

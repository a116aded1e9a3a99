#pragma once

#include <array>
#include <vector>

#include "novlex/program.hpp"
#include "novlex/random.hpp"
#include "novlex/vm.hpp"

namespace novlex {

/// Ephemeral random constant generators.
enum class Erc : std::uint8_t {
    integer,    // uniform in [-100, 100]
    floating,   // uniform in [-100, 100], 4 decimals
    boolean,    // fair coin
    character,  // one visible ASCII character
    string,     // visible ASCII, length 0..10
};

/// Everything a random gene can be: an instruction, a fresh ERC draw, or a
/// problem constant. Each entry is equally likely.
struct AtomSet {
    std::vector<InstructionRef> instructions;
    std::vector<Erc> ercs;
    std::vector<Value> constants;

    std::size_t size() const noexcept { return instructions.size() + ercs.size() + constants.size(); }
};

/// P(close_count = 0, 1, 2, 3).
inline constexpr std::array<double, 4> close_count_distribution{0.772, 0.206, 0.021, 0.001};

Value random_erc(Erc kind, Rng& rng);
std::uint32_t random_close_count(Rng& rng);

/// Payload drawn uniformly over `atoms`, close count from the fixed distribution.
Gene random_gene(const AtomSet& atoms, Rng& rng);

/// Length uniform in [1, limits.max_initial_genome_size]. Throws ConfigError
/// when `atoms` has no instructions.
Genome random_genome(Rng& rng, const ExecutionLimits& limits, const AtomSet& atoms);

} // namespace novlex

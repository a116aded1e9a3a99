#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "novlex/program.hpp"
#include "novlex/value.hpp"

namespace novlex {

struct ExecutionLimits {
    std::size_t step_limit = 2000;
    std::size_t max_genome_size = 800;
    std::size_t max_initial_genome_size = 100;

    /// Throws ConfigError unless every field is strictly positive.
    void validate() const;

    friend bool operator==(const ExecutionLimits&, const ExecutionLimits&) = default;
};

/// Entry on the exec stack. Loop kinds carry their own counters so control
/// flow never allocates code.
struct ExecItem {
    enum class Kind : std::uint8_t {
        node,         // program node
        instruction,  // bare instruction (re-pushed exec_while)
        range,        // do_range / do_count continuation, pushes the index
        times,        // do_times continuation
        iterate,      // element-wise iteration over loop_values[end]
        sequence,     // the `end` nodes starting at `node`, first one on top
    };

    Kind kind = Kind::node;
    std::uint16_t instruction = 0;
    std::uint32_t pool = 0;
    const Node* node = nullptr;
    std::int64_t current = 0;
    std::int64_t end = 0;
};

struct VmState {
    std::vector<ExecItem> exec;
    std::vector<std::int64_t> integer;
    std::vector<double> floating;
    std::vector<bool> boolean;
    std::vector<std::string> string;
    std::vector<IntVector> vector_integer;
    std::vector<FloatVector> vector_float;
    std::string print_buffer;
    std::vector<Value> inputs;
    std::size_t steps_used = 0;

    /// Loop bodies (indexed by ExecItem::pool) and iterated values (indexed by
    /// ExecItem::end for iterate items). Both only grow during one execution.
    std::vector<ExecItem> loop_bodies;
    std::vector<Value> loop_values;

    void clear();
};

template <class T>
std::vector<T>& stack_of(VmState& s) noexcept;

template <> inline std::vector<std::int64_t>& stack_of(VmState& s) noexcept { return s.integer; }
template <> inline std::vector<double>& stack_of(VmState& s) noexcept { return s.floating; }
template <> inline std::vector<bool>& stack_of(VmState& s) noexcept { return s.boolean; }
template <> inline std::vector<std::string>& stack_of(VmState& s) noexcept { return s.string; }
template <> inline std::vector<IntVector>& stack_of(VmState& s) noexcept { return s.vector_integer; }
template <> inline std::vector<FloatVector>& stack_of(VmState& s) noexcept { return s.vector_float; }

void push_value(VmState& s, const Value& v);

/// Interprets `program` until the exec stack empties or the step limit is hit.
VmState execute(const Program& program, std::span<const Value> inputs, const ExecutionLimits& limits);

/// Same as above, reusing `state`'s storage.
void execute(const Program& program, std::span<const Value> inputs, const ExecutionLimits& limits,
             VmState& state);

} // namespace novlex

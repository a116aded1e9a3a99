#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "novlex/instructions.hpp"
#include "novlex/value.hpp"

namespace novlex {

/// One unit of a linear genome: an instruction or literal, plus the number of
/// open code blocks it closes on translation.
struct Gene {
    std::variant<InstructionRef, Value> payload;
    std::uint32_t close_count = 0;

    bool is_instruction() const noexcept { return payload.index() == 0; }
    friend bool operator==(const Gene&, const Gene&) = default;
};

using Genome = std::vector<Gene>;

struct Node {
    enum class Kind : std::uint8_t { instruction, literal, block };

    Kind kind = Kind::block;
    InstructionRef instruction{};
    Value literal{};
    std::vector<Node> children;

    static Node make_instruction(InstructionRef ref);
    static Node make_literal(Value v);
    static Node make_block(std::vector<Node> children = {});

    friend bool operator==(const Node&, const Node&) = default;
};

/// Nested program. Any tree of instructions, literals and blocks is valid.
struct Program {
    std::vector<Node> body;

    std::size_t size() const noexcept;  // total node count, blocks included
    friend bool operator==(const Program&, const Program&) = default;
};

/// Genome to nested program. Total: unclosed blocks are closed at the end and
/// surplus closes are ignored.
Program translate_genome(const Genome& genome);

/// Parenthesized text form, e.g. "(exec_if (1) (2))".
std::string to_text(const Program& program);
std::string to_text(const Gene& gene);

/// Inverse of to_text. Throws std::invalid_argument on malformed text or
/// unknown instruction names.
Program parse_program(std::string_view text);
Gene parse_gene(std::string_view atom, std::uint32_t close_count = 0);

/// A genome that translates to `program`. Throws std::invalid_argument when a
/// block is not the argument of a block-opening instruction.
Genome genome_of(const Program& program);

} // namespace novlex

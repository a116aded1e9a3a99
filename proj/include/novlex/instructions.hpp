#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "novlex/value.hpp"

namespace novlex {

struct VmState;

struct InstructionRef {
    std::uint16_t id = 0;
    friend auto operator<=>(const InstructionRef&, const InstructionRef&) = default;
};

using InstructionFn = void (*)(VmState&);

/// Bit set over DataType values plus a printing capability.
using TypeMask = std::uint16_t;

constexpr TypeMask type_bit(DataType t) noexcept
{
    return static_cast<TypeMask>(1u << static_cast<unsigned>(t));
}
inline constexpr TypeMask print_bit = 1u << 8;

template <class... Ts>
constexpr TypeMask types(Ts... ts) noexcept
{
    return static_cast<TypeMask>((TypeMask{0} | ... | type_bit(ts)));
}

struct InstructionInfo {
    std::string name;
    InstructionFn fn = nullptr;
    /// Number of code blocks this instruction opens when translated from a genome.
    std::uint8_t opens = 0;
    /// Stacks (and print capability) the instruction touches.
    TypeMask requires_types = 0;
    /// 1-based input index for in1..inN, 0 otherwise.
    std::uint8_t input_index = 0;
};

class InstructionRegistry {
public:
    static const InstructionRegistry& builtin();

    std::size_t size() const noexcept { return entries_.size(); }
    const InstructionInfo& at(InstructionRef ref) const { return entries_.at(ref.id); }
    std::optional<InstructionRef> find(std::string_view name) const;
    InstructionRef require(std::string_view name) const;
    std::vector<std::string> names() const;

    /// Every instruction whose stacks are all within `allowed` (exec is always
    /// allowed) plus in1..in`input_count`.
    std::vector<InstructionRef> select(TypeMask allowed, std::size_t input_count) const;

    InstructionRef add(InstructionInfo info);

private:
    std::vector<InstructionInfo> entries_;
    std::unordered_map<std::string, std::uint16_t> by_name_;
};

inline const InstructionInfo& instruction_info(InstructionRef ref)
{
    return InstructionRegistry::builtin().at(ref);
}

/// Maximum number of program inputs (in1..inN) the registry provides.
inline constexpr std::size_t max_inputs = 3;

} // namespace novlex

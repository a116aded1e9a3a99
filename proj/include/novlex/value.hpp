#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace novlex {

using IntVector = std::vector<std::int64_t>;
using FloatVector = std::vector<double>;

/// A typed literal. Alternative order matches `DataType` (minus exec).
using Value = std::variant<std::int64_t, double, bool, std::string, IntVector, FloatVector>;

enum class DataType : std::uint8_t {
    exec,
    integer,
    floating,
    boolean,
    string,
    vector_integer,
    vector_float,
};

inline constexpr std::size_t data_type_count = 7;

constexpr DataType type_of(const Value& v) noexcept
{
    return static_cast<DataType>(v.index() + 1);
}

std::string_view type_name(DataType t) noexcept;

/// Magnitude bound applied to every integer and float result.
inline constexpr double max_number_magnitude = 1e12;

std::int64_t clamp_int(std::int64_t x) noexcept;
double clamp_float(double x) noexcept;

/// Text form used in program dumps: 5, 2.5, true, "a\n", [1 2], #f[1.0 2.5].
std::string format_value(const Value& v);
std::string format_float(double x);
std::string quote_string(std::string_view s);

} // namespace novlex

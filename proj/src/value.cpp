#include "novlex/value.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace novlex {

std::string_view type_name(DataType t) noexcept
{
    switch (t) {
    case DataType::exec: return "exec";
    case DataType::integer: return "integer";
    case DataType::floating: return "float";
    case DataType::boolean: return "boolean";
    case DataType::string: return "string";
    case DataType::vector_integer: return "vector_integer";
    case DataType::vector_float: return "vector_float";
    }
    return "?";
}

std::int64_t clamp_int(std::int64_t x) noexcept
{
    constexpr auto bound = static_cast<std::int64_t>(max_number_magnitude);
    return std::clamp(x, -bound, bound);
}

double clamp_float(double x) noexcept
{
    if (std::isnan(x)) {
        return 0.0;
    }
    return std::clamp(x, -max_number_magnitude, max_number_magnitude);
}

std::string format_float(double x)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    std::string out(buf, end);
    if (out.find_first_of(".eni") == std::string::npos) {
        out += ".0";
    }
    return out;
}

std::string quote_string(std::string_view s)
{
    std::string out;
    out.reserve(s.size() + 2);
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

namespace {

template <class T, class F>
std::string join(const std::vector<T>& xs, F&& fmt)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += fmt(xs[i]);
    }
    return out;
}

} // namespace

std::string format_value(const Value& v)
{
    switch (type_of(v)) {
    case DataType::integer: return std::to_string(std::get<std::int64_t>(v));
    case DataType::floating: return format_float(std::get<double>(v));
    case DataType::boolean: return std::get<bool>(v) ? "true" : "false";
    case DataType::string: return quote_string(std::get<std::string>(v));
    case DataType::vector_integer:
        return "[" + join(std::get<IntVector>(v), [](std::int64_t x) { return std::to_string(x); }) + "]";
    case DataType::vector_float:
        return "#f[" + join(std::get<FloatVector>(v), [](double x) { return format_float(x); }) + "]";
    case DataType::exec: break;
    }
    return {};
}

} // namespace novlex

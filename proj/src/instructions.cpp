#include "novlex/instructions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "novlex/errors.hpp"
#include "novlex/vm.hpp"
#include "vm_detail.hpp"

namespace novlex {

namespace {

using detail::max_sequence_length;

template <class T>
bool has(VmState& s, std::size_t n = 1)
{
    return stack_of<T>(s).size() >= n;
}

template <class T>
T pop(VmState& s)
{
    auto& st = stack_of<T>(s);
    T v = std::move(st.back());
    st.pop_back();
    return v;
}

template <class T>
void push(VmState& s, T v)
{
    stack_of<T>(s).push_back(std::move(v));
}

std::int64_t floor_mod(std::int64_t a, std::int64_t n)
{
    auto r = a % n;
    return (r != 0 && ((r < 0) != (n < 0))) ? r + n : r;
}

std::size_t wrap_index(std::int64_t i, std::size_t len)
{
    return static_cast<std::size_t>(floor_mod(i, static_cast<std::int64_t>(len)));
}

std::int64_t saturate(__int128 x)
{
    constexpr auto bound = static_cast<__int128>(max_number_magnitude);
    return static_cast<std::int64_t>(std::clamp(x, -bound, bound));
}

// ---- generic stack manipulation -------------------------------------------

template <class T>
void op_dup(VmState& s)
{
    if (has<T>(s)) {
        auto& st = stack_of<T>(s);
        T top = st.back();
        st.push_back(std::move(top));
    }
}

template <class T>
void op_swap(VmState& s)
{
    if (has<T>(s, 2)) {
        auto& st = stack_of<T>(s);
        std::swap(st[st.size() - 1], st[st.size() - 2]);
    }
}

template <class T>
void op_pop(VmState& s)
{
    if (has<T>(s)) {
        stack_of<T>(s).pop_back();
    }
}

// (a b c) with c on top becomes (b c a).
template <class T>
void op_rot(VmState& s)
{
    if (has<T>(s, 3)) {
        auto& st = stack_of<T>(s);
        auto first = st.end() - 3;
        std::rotate(first, first + 1, st.end());
    }
}

template <class T>
void op_eq(VmState& s)
{
    if (has<T>(s, 2)) {
        T b = pop<T>(s);
        T a = pop<T>(s);
        s.boolean.push_back(a == b);
    }
}

// ---- numbers ---------------------------------------------------------------

template <class F>
void int_binary(VmState& s, F f)
{
    if (has<std::int64_t>(s, 2)) {
        auto b = pop<std::int64_t>(s);
        auto a = pop<std::int64_t>(s);
        s.integer.push_back(saturate(f(static_cast<__int128>(a), static_cast<__int128>(b))));
    }
}

template <class F>
void int_compare(VmState& s, F f)
{
    if (has<std::int64_t>(s, 2)) {
        auto b = pop<std::int64_t>(s);
        auto a = pop<std::int64_t>(s);
        s.boolean.push_back(f(a, b));
    }
}

template <class F>
void float_binary(VmState& s, F f)
{
    if (has<double>(s, 2)) {
        auto b = pop<double>(s);
        auto a = pop<double>(s);
        s.floating.push_back(clamp_float(f(a, b)));
    }
}

template <class F>
void float_compare(VmState& s, F f)
{
    if (has<double>(s, 2)) {
        auto b = pop<double>(s);
        auto a = pop<double>(s);
        s.boolean.push_back(f(a, b));
    }
}

template <class F>
void bool_binary(VmState& s, F f)
{
    if (has<bool>(s, 2)) {
        bool b = pop<bool>(s);
        bool a = pop<bool>(s);
        s.boolean.push_back(f(a, b));
    }
}

// ---- vectors ----------------------------------------------------------------

template <class V>
using Elem = typename V::value_type;

template <class V>
void vec_length(VmState& s)
{
    if (has<V>(s)) {
        push<std::int64_t>(s, static_cast<std::int64_t>(pop<V>(s).size()));
    }
}

template <class V>
void vec_nth(VmState& s)
{
    if (has<V>(s) && has<std::int64_t>(s) && !stack_of<V>(s).back().empty()) {
        auto i = pop<std::int64_t>(s);
        V v = pop<V>(s);
        push<Elem<V>>(s, v[wrap_index(i, v.size())]);
    }
}

template <class V>
void vec_first(VmState& s)
{
    if (has<V>(s) && !stack_of<V>(s).back().empty()) {
        V v = pop<V>(s);
        push<Elem<V>>(s, v.front());
    }
}

template <class V>
void vec_last(VmState& s)
{
    if (has<V>(s) && !stack_of<V>(s).back().empty()) {
        V v = pop<V>(s);
        push<Elem<V>>(s, v.back());
    }
}

template <class V>
void vec_rest(VmState& s)
{
    if (has<V>(s)) {
        auto& v = stack_of<V>(s).back();
        if (!v.empty()) {
            v.erase(v.begin());
        }
    }
}

template <class V>
void vec_butlast(VmState& s)
{
    if (has<V>(s)) {
        auto& v = stack_of<V>(s).back();
        if (!v.empty()) {
            v.pop_back();
        }
    }
}

template <class V>
void vec_reverse(VmState& s)
{
    if (has<V>(s)) {
        auto& v = stack_of<V>(s).back();
        std::reverse(v.begin(), v.end());
    }
}

template <class V>
void vec_conj(VmState& s)
{
    if (has<V>(s) && has<Elem<V>>(s) && stack_of<V>(s).back().size() < max_sequence_length) {
        auto x = pop<Elem<V>>(s);
        stack_of<V>(s).back().push_back(x);
    }
}

template <class V>
void vec_empty(VmState& s)
{
    if (has<V>(s)) {
        s.boolean.push_back(pop<V>(s).empty());
    }
}

template <class V>
void vec_emptyvector(VmState& s)
{
    push<V>(s, V{});
}

// Top of the integer stack is the new value, below it the index.
template <class V>
void vec_set(VmState& s)
{
    if (has<V>(s) && has<Elem<V>>(s) && has<std::int64_t>(s, std::is_same_v<Elem<V>, std::int64_t> ? 2 : 1) &&
        !stack_of<V>(s).back().empty()) {
        auto x = pop<Elem<V>>(s);
        auto i = pop<std::int64_t>(s);
        auto& v = stack_of<V>(s).back();
        v[wrap_index(i, v.size())] = x;
    }
}

void vi_index_of(VmState& s)
{
    if (has<IntVector>(s) && has<std::int64_t>(s)) {
        auto x = pop<std::int64_t>(s);
        IntVector v = pop<IntVector>(s);
        auto it = std::find(v.begin(), v.end(), x);
        push<std::int64_t>(s, it == v.end() ? -1 : static_cast<std::int64_t>(it - v.begin()));
    }
}

void vi_replace(VmState& s)
{
    if (has<IntVector>(s) && has<std::int64_t>(s, 2)) {
        auto replacement = pop<std::int64_t>(s);
        auto target = pop<std::int64_t>(s);
        auto& v = stack_of<IntVector>(s).back();
        std::replace(v.begin(), v.end(), target, replacement);
    }
}

// ---- strings ----------------------------------------------------------------

bool is_space(char c)
{
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

void str_concat(VmState& s)
{
    if (has<std::string>(s, 2)) {
        auto& st = s.string;
        if (st[st.size() - 1].size() + st[st.size() - 2].size() <= max_sequence_length) {
            auto b = pop<std::string>(s);
            st.back() += b;
        }
    }
}

void str_nth(VmState& s)
{
    if (has<std::string>(s) && has<std::int64_t>(s) && !s.string.back().empty()) {
        auto i = pop<std::int64_t>(s);
        auto& str = s.string.back();
        str = std::string(1, str[wrap_index(i, str.size())]);
    }
}

void str_first(VmState& s)
{
    if (has<std::string>(s) && !s.string.back().empty()) {
        s.string.back().resize(1);
    }
}

void str_last(VmState& s)
{
    if (has<std::string>(s) && !s.string.back().empty()) {
        auto& str = s.string.back();
        str = std::string(1, str.back());
    }
}

// Words are pushed last-to-first so the first word ends on top.
void str_split(VmState& s)
{
    if (!has<std::string>(s)) {
        return;
    }
    auto str = pop<std::string>(s);
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < str.size()) {
        while (i < str.size() && is_space(str[i])) {
            ++i;
        }
        std::size_t j = i;
        while (j < str.size() && !is_space(str[j])) {
            ++j;
        }
        if (j > i) {
            words.emplace_back(str.substr(i, j - i));
        }
        i = j;
    }
    for (auto it = words.rbegin(); it != words.rend(); ++it) {
        s.string.push_back(std::move(*it));
    }
}

// Stack (s from to) with `to` on top; replaces every occurrence of `from` in s.
void str_replace(VmState& s)
{
    if (!has<std::string>(s, 3)) {
        return;
    }
    auto& st = s.string;
    const std::string& to = st[st.size() - 1];
    const std::string& from = st[st.size() - 2];
    const std::string& str = st[st.size() - 3];
    if (from.empty()) {
        return;
    }
    std::string out;
    std::size_t pos = 0;
    while (true) {
        auto hit = str.find(from, pos);
        if (hit == std::string::npos) {
            out.append(str, pos);
            break;
        }
        out.append(str, pos, hit - pos);
        out += to;
        pos = hit + from.size();
        if (out.size() > max_sequence_length) {
            return;
        }
    }
    if (out.size() > max_sequence_length) {
        return;
    }
    st.resize(st.size() - 3);
    st.push_back(std::move(out));
}

void str_contains(VmState& s)
{
    if (has<std::string>(s, 2)) {
        auto sub = pop<std::string>(s);
        auto str = pop<std::string>(s);
        s.boolean.push_back(str.find(sub) != std::string::npos);
    }
}

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

template <bool (*Pred)(char)>
void str_is(VmState& s)
{
    if (has<std::string>(s)) {
        auto str = pop<std::string>(s);
        s.boolean.push_back(!str.empty() && std::all_of(str.begin(), str.end(), Pred));
    }
}

void str_char_code(VmState& s)
{
    if (has<std::string>(s) && !s.string.back().empty()) {
        auto str = pop<std::string>(s);
        push<std::int64_t>(s, static_cast<unsigned char>(str.front()));
    }
}

// ---- printing ---------------------------------------------------------------

void print_text(VmState& s, std::string_view text)
{
    if (s.print_buffer.size() + text.size() <= max_sequence_length) {
        s.print_buffer += text;
    }
}

// ---- exec -------------------------------------------------------------------

InstructionRef exec_while_ref{};

std::uint32_t stash_body(VmState& s, const ExecItem& body)
{
    s.loop_bodies.push_back(body);
    return static_cast<std::uint32_t>(s.loop_bodies.size() - 1);
}

ExecItem loop_item(ExecItem::Kind kind, std::uint32_t body, std::int64_t current, std::int64_t end)
{
    ExecItem item;
    item.kind = kind;
    item.pool = body;
    item.current = current;
    item.end = end;
    return item;
}

void exec_if(VmState& s)
{
    detail::expose(s, 2);
    if (has<bool>(s) && s.exec.size() >= 2) {
        bool b = pop<bool>(s);
        if (b) {
            s.exec.erase(s.exec.end() - 2);
        } else {
            s.exec.pop_back();
        }
    }
}

void exec_when(VmState& s)
{
    detail::expose(s, 1);
    if (has<bool>(s) && !s.exec.empty()) {
        if (!pop<bool>(s)) {
            s.exec.pop_back();
        }
    }
}

void exec_while(VmState& s)
{
    detail::expose(s, 1);
    if (s.exec.empty()) {
        return;
    }
    if (!has<bool>(s) || !pop<bool>(s)) {
        s.exec.pop_back();
        return;
    }
    ExecItem body = s.exec.back();
    ExecItem again;
    again.kind = ExecItem::Kind::instruction;
    again.instruction = exec_while_ref.id;
    s.exec.push_back(again);
    s.exec.push_back(body);
}

void exec_do_range(VmState& s)
{
    detail::expose(s, 1);
    if (has<std::int64_t>(s, 2) && !s.exec.empty()) {
        auto end = pop<std::int64_t>(s);
        auto current = pop<std::int64_t>(s);
        auto body = stash_body(s, s.exec.back());
        s.exec.pop_back();
        detail::step_range(s, loop_item(ExecItem::Kind::range, body, current, end));
    }
}

void exec_do_count(VmState& s)
{
    detail::expose(s, 1);
    if (has<std::int64_t>(s) && !s.exec.empty()) {
        auto n = pop<std::int64_t>(s);
        ExecItem body_item = s.exec.back();
        s.exec.pop_back();
        if (n > 0) {
            detail::step_range(s, loop_item(ExecItem::Kind::range, stash_body(s, body_item), 0, n - 1));
        }
    }
}

void exec_do_times(VmState& s)
{
    detail::expose(s, 1);
    if (has<std::int64_t>(s) && !s.exec.empty()) {
        auto n = pop<std::int64_t>(s);
        ExecItem body_item = s.exec.back();
        s.exec.pop_back();
        if (n > 0) {
            detail::step_times(s, loop_item(ExecItem::Kind::times, stash_body(s, body_item), 0, n - 1));
        }
    }
}

template <class T>
void exec_iterate(VmState& s)
{
    detail::expose(s, 1);
    if (has<T>(s) && !s.exec.empty()) {
        T seq = pop<T>(s);
        ExecItem body_item = s.exec.back();
        s.exec.pop_back();
        if (!seq.empty()) {
            auto body = stash_body(s, body_item);
            s.loop_values.emplace_back(std::move(seq));
            detail::step_iterate(
                s, loop_item(ExecItem::Kind::iterate, body, 0, static_cast<std::int64_t>(s.loop_values.size() - 1)));
        }
    }
}

void exec_dup(VmState& s)
{
    detail::expose(s, 1);
    if (!s.exec.empty()) {
        s.exec.push_back(s.exec.back());
    }
}

void exec_pop(VmState& s)
{
    detail::expose(s, 1);
    if (!s.exec.empty()) {
        s.exec.pop_back();
    }
}

void exec_swap(VmState& s)
{
    detail::expose(s, 2);
    if (s.exec.size() >= 2) {
        std::swap(s.exec[s.exec.size() - 1], s.exec[s.exec.size() - 2]);
    }
}

template <std::size_t I>
void input(VmState& s)
{
    if (I < s.inputs.size()) {
        push_value(s, s.inputs[I]);
    }
}

// ---- registration -------------------------------------------------------------

constexpr auto I = DataType::integer;
constexpr auto F = DataType::floating;
constexpr auto B = DataType::boolean;
constexpr auto S = DataType::string;
constexpr auto VI = DataType::vector_integer;
constexpr auto VF = DataType::vector_float;

template <class T>
void add_stack_ops(InstructionRegistry& r, const std::string& prefix, DataType t)
{
    r.add({prefix + "_dup", &op_dup<T>, 0, types(t)});
    r.add({prefix + "_swap", &op_swap<T>, 0, types(t)});
    r.add({prefix + "_pop", &op_pop<T>, 0, types(t)});
    r.add({prefix + "_rot", &op_rot<T>, 0, types(t)});
    r.add({prefix + "_eq", &op_eq<T>, 0, types(t, B)});
}

template <class V>
void add_vector_ops(InstructionRegistry& r, const std::string& prefix, DataType t, DataType elem)
{
    add_stack_ops<V>(r, prefix, t);
    r.add({prefix + "_length", &vec_length<V>, 0, types(t, I)});
    r.add({prefix + "_nth", &vec_nth<V>, 0, types(t, I, elem)});
    r.add({prefix + "_set", &vec_set<V>, 0, types(t, I, elem)});
    r.add({prefix + "_first", &vec_first<V>, 0, types(t, elem)});
    r.add({prefix + "_last", &vec_last<V>, 0, types(t, elem)});
    r.add({prefix + "_rest", &vec_rest<V>, 0, types(t)});
    r.add({prefix + "_butlast", &vec_butlast<V>, 0, types(t)});
    r.add({prefix + "_reverse", &vec_reverse<V>, 0, types(t)});
    r.add({prefix + "_conj", &vec_conj<V>, 0, types(t, elem)});
    r.add({prefix + "_empty", &vec_empty<V>, 0, types(t, B)});
    r.add({prefix + "_emptyvector", &vec_emptyvector<V>, 0, types(t)});
    r.add({prefix + "_iterate", &exec_iterate<V>, 1, types(t, elem)});
}

InstructionRegistry make_builtin()
{
    InstructionRegistry r;

    // exec
    r.add({"exec_noop", [](VmState&) {}, 0, 0});
    r.add({"exec_if", &exec_if, 2, types(B)});
    r.add({"exec_when", &exec_when, 1, types(B)});
    exec_while_ref = r.add({"exec_while", &exec_while, 1, types(B)});
    r.add({"exec_do_range", &exec_do_range, 1, types(I)});
    r.add({"exec_do_count", &exec_do_count, 1, types(I)});
    r.add({"exec_do_times", &exec_do_times, 1, types(I)});
    r.add({"exec_dup", &exec_dup, 1, 0});
    r.add({"exec_pop", &exec_pop, 1, 0});
    r.add({"exec_swap", &exec_swap, 2, 0});

    // integer
    add_stack_ops<std::int64_t>(r, "integer", I);
    r.add({"integer_add", +[](VmState& s) { int_binary(s, [](auto a, auto b) { return a + b; }); }, 0, types(I)});
    r.add({"integer_sub", +[](VmState& s) { int_binary(s, [](auto a, auto b) { return a - b; }); }, 0, types(I)});
    r.add({"integer_mult", +[](VmState& s) { int_binary(s, [](auto a, auto b) { return a * b; }); }, 0, types(I)});
    r.add({"integer_div",
           +[](VmState& s) {
               if (has<std::int64_t>(s, 2) && s.integer.back() != 0) {
                   int_binary(s, [](auto a, auto b) { return a / b; });
               }
           },
           0, types(I)});
    r.add({"integer_mod",
           +[](VmState& s) {
               if (has<std::int64_t>(s, 2) && s.integer.back() != 0) {
                   int_binary(s, [](auto a, auto b) {
                       return static_cast<__int128>(floor_mod(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)));
                   });
               }
           },
           0, types(I)});
    r.add({"integer_min", +[](VmState& s) { int_binary(s, [](auto a, auto b) { return std::min(a, b); }); }, 0, types(I)});
    r.add({"integer_max", +[](VmState& s) { int_binary(s, [](auto a, auto b) { return std::max(a, b); }); }, 0, types(I)});
    r.add({"integer_inc",
           +[](VmState& s) {
               if (has<std::int64_t>(s)) s.integer.back() = clamp_int(s.integer.back() + 1);
           },
           0, types(I)});
    r.add({"integer_dec",
           +[](VmState& s) {
               if (has<std::int64_t>(s)) s.integer.back() = clamp_int(s.integer.back() - 1);
           },
           0, types(I)});
    r.add({"integer_lt", +[](VmState& s) { int_compare(s, std::less<>{}); }, 0, types(I, B)});
    r.add({"integer_gt", +[](VmState& s) { int_compare(s, std::greater<>{}); }, 0, types(I, B)});
    r.add({"integer_lte", +[](VmState& s) { int_compare(s, std::less_equal<>{}); }, 0, types(I, B)});
    r.add({"integer_gte", +[](VmState& s) { int_compare(s, std::greater_equal<>{}); }, 0, types(I, B)});
    r.add({"integer_from_boolean",
           +[](VmState& s) {
               if (has<bool>(s)) push<std::int64_t>(s, pop<bool>(s) ? 1 : 0);
           },
           0, types(I, B)});
    r.add({"integer_from_float",
           +[](VmState& s) {
               if (has<double>(s)) push<std::int64_t>(s, static_cast<std::int64_t>(std::trunc(pop<double>(s))));
           },
           0, types(I, F)});

    // float
    add_stack_ops<double>(r, "float", F);
    r.add({"float_add", +[](VmState& s) { float_binary(s, std::plus<>{}); }, 0, types(F)});
    r.add({"float_sub", +[](VmState& s) { float_binary(s, std::minus<>{}); }, 0, types(F)});
    r.add({"float_mult", +[](VmState& s) { float_binary(s, std::multiplies<>{}); }, 0, types(F)});
    r.add({"float_div",
           +[](VmState& s) {
               if (has<double>(s, 2) && s.floating.back() != 0.0) float_binary(s, std::divides<>{});
           },
           0, types(F)});
    r.add({"float_min", +[](VmState& s) { float_binary(s, [](double a, double b) { return std::min(a, b); }); }, 0, types(F)});
    r.add({"float_max", +[](VmState& s) { float_binary(s, [](double a, double b) { return std::max(a, b); }); }, 0, types(F)});
    r.add({"float_inc",
           +[](VmState& s) {
               if (has<double>(s)) s.floating.back() = clamp_float(s.floating.back() + 1.0);
           },
           0, types(F)});
    r.add({"float_dec",
           +[](VmState& s) {
               if (has<double>(s)) s.floating.back() = clamp_float(s.floating.back() - 1.0);
           },
           0, types(F)});
    r.add({"float_lt", +[](VmState& s) { float_compare(s, std::less<>{}); }, 0, types(F, B)});
    r.add({"float_gt", +[](VmState& s) { float_compare(s, std::greater<>{}); }, 0, types(F, B)});
    r.add({"float_from_integer",
           +[](VmState& s) {
               if (has<std::int64_t>(s)) push<double>(s, static_cast<double>(pop<std::int64_t>(s)));
           },
           0, types(F, I)});

    // boolean
    add_stack_ops<bool>(r, "boolean", B);
    r.add({"boolean_and", +[](VmState& s) { bool_binary(s, [](bool a, bool b) { return a && b; }); }, 0, types(B)});
    r.add({"boolean_or", +[](VmState& s) { bool_binary(s, [](bool a, bool b) { return a || b; }); }, 0, types(B)});
    r.add({"boolean_xor", +[](VmState& s) { bool_binary(s, [](bool a, bool b) { return a != b; }); }, 0, types(B)});
    r.add({"boolean_not",
           +[](VmState& s) {
               if (has<bool>(s)) s.boolean.back() = !s.boolean.back();
           },
           0, types(B)});
    r.add({"boolean_from_integer",
           +[](VmState& s) {
               if (has<std::int64_t>(s)) s.boolean.push_back(pop<std::int64_t>(s) != 0);
           },
           0, types(B, I)});

    // string
    add_stack_ops<std::string>(r, "string", S);
    r.add({"string_concat", &str_concat, 0, types(S)});
    r.add({"string_length",
           +[](VmState& s) {
               if (has<std::string>(s)) push<std::int64_t>(s, static_cast<std::int64_t>(pop<std::string>(s).size()));
           },
           0, types(S, I)});
    r.add({"string_reverse",
           +[](VmState& s) {
               if (has<std::string>(s)) std::reverse(s.string.back().begin(), s.string.back().end());
           },
           0, types(S)});
    r.add({"string_nth", &str_nth, 0, types(S, I)});
    r.add({"string_first", &str_first, 0, types(S)});
    r.add({"string_last", &str_last, 0, types(S)});
    r.add({"string_rest",
           +[](VmState& s) {
               if (has<std::string>(s) && !s.string.back().empty()) s.string.back().erase(0, 1);
           },
           0, types(S)});
    r.add({"string_butlast",
           +[](VmState& s) {
               if (has<std::string>(s) && !s.string.back().empty()) s.string.back().pop_back();
           },
           0, types(S)});
    r.add({"string_split", &str_split, 0, types(S)});
    r.add({"string_replace", &str_replace, 0, types(S)});
    r.add({"string_contains", &str_contains, 0, types(S, B)});
    r.add({"string_empty",
           +[](VmState& s) {
               if (has<std::string>(s)) s.boolean.push_back(pop<std::string>(s).empty());
           },
           0, types(S, B)});
    r.add({"string_is_letter", &str_is<is_letter>, 0, types(S, B)});
    r.add({"string_is_digit", &str_is<is_digit>, 0, types(S, B)});
    r.add({"string_is_whitespace", &str_is<is_space>, 0, types(S, B)});
    r.add({"string_char_code", &str_char_code, 0, types(S, I)});
    r.add({"string_from_integer",
           +[](VmState& s) {
               if (has<std::int64_t>(s)) push<std::string>(s, std::to_string(pop<std::int64_t>(s)));
           },
           0, types(S, I)});
    r.add({"string_stackdepth",
           +[](VmState& s) { push<std::int64_t>(s, static_cast<std::int64_t>(s.string.size())); }, 0, types(S, I)});
    r.add({"string_iterate", &exec_iterate<std::string>, 1, types(S)});

    // vectors
    add_vector_ops<IntVector>(r, "vector_integer", VI, I);
    r.add({"vector_integer_index_of", &vi_index_of, 0, types(VI, I)});
    r.add({"vector_integer_replace", &vi_replace, 0, types(VI, I)});
    add_vector_ops<FloatVector>(r, "vector_float", VF, F);

    // printing
    r.add({"print_newline", +[](VmState& s) { print_text(s, "\n"); }, 0, print_bit});
    r.add({"print_integer",
           +[](VmState& s) {
               if (has<std::int64_t>(s)) print_text(s, std::to_string(pop<std::int64_t>(s)));
           },
           0, static_cast<TypeMask>(print_bit | types(I))});
    r.add({"print_float",
           +[](VmState& s) {
               if (has<double>(s)) print_text(s, format_float(pop<double>(s)));
           },
           0, static_cast<TypeMask>(print_bit | types(F))});
    r.add({"print_boolean",
           +[](VmState& s) {
               if (has<bool>(s)) print_text(s, pop<bool>(s) ? "true" : "false");
           },
           0, static_cast<TypeMask>(print_bit | types(B))});
    r.add({"print_string",
           +[](VmState& s) {
               if (has<std::string>(s)) print_text(s, pop<std::string>(s));
           },
           0, static_cast<TypeMask>(print_bit | types(S))});

    // inputs
    r.add({"in1", &input<0>, 0, 0, 1});
    r.add({"in2", &input<1>, 0, 0, 2});
    r.add({"in3", &input<2>, 0, 0, 3});
    static_assert(max_inputs == 3);

    return r;
}

} // namespace

namespace detail {

// Pushes the index, then schedules the next iteration beneath the body.
void step_range(VmState& s, const ExecItem& item)
{
    s.integer.push_back(item.current);
    if (item.current != item.end) {
        ExecItem next = item;
        next.current += item.current < item.end ? 1 : -1;
        s.exec.push_back(next);
    }
    s.exec.push_back(s.loop_bodies[item.pool]);
}

void step_times(VmState& s, const ExecItem& item)
{
    if (item.current != item.end) {
        ExecItem next = item;
        next.current += 1;
        s.exec.push_back(next);
    }
    s.exec.push_back(s.loop_bodies[item.pool]);
}

void step_iterate(VmState& s, const ExecItem& item)
{
    const Value& seq = s.loop_values[static_cast<std::size_t>(item.end)];
    const auto pos = static_cast<std::size_t>(item.current);
    std::size_t len = 0;
    std::visit(
        [&]<class T>(const T& v) {
            if constexpr (std::is_same_v<T, std::string>) {
                len = v.size();
                s.string.emplace_back(1, v[pos]);
            } else if constexpr (std::is_same_v<T, IntVector> || std::is_same_v<T, FloatVector>) {
                len = v.size();
                stack_of<typename T::value_type>(s).push_back(v[pos]);
            }
        },
        seq);
    if (pos + 1 < len) {
        ExecItem next = item;
        next.current += 1;
        s.exec.push_back(next);
    }
    s.exec.push_back(s.loop_bodies[item.pool]);
}

} // namespace detail

const InstructionRegistry& InstructionRegistry::builtin()
{
    static const InstructionRegistry registry = make_builtin();
    return registry;
}

InstructionRef InstructionRegistry::add(InstructionInfo info)
{
    if (by_name_.contains(info.name)) {
        throw ConfigError("duplicate instruction " + info.name);
    }
    auto id = static_cast<std::uint16_t>(entries_.size());
    by_name_.emplace(info.name, id);
    entries_.push_back(std::move(info));
    return InstructionRef{id};
}

std::optional<InstructionRef> InstructionRegistry::find(std::string_view name) const
{
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) {
        return std::nullopt;
    }
    return InstructionRef{it->second};
}

InstructionRef InstructionRegistry::require(std::string_view name) const
{
    if (auto ref = find(name)) {
        return *ref;
    }
    throw ConfigError("unknown instruction " + std::string(name));
}

std::vector<std::string> InstructionRegistry::names() const
{
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) {
        out.push_back(e.name);
    }
    return out;
}

std::vector<InstructionRef> InstructionRegistry::select(TypeMask allowed, std::size_t input_count) const
{
    allowed |= type_bit(DataType::exec);
    std::vector<InstructionRef> out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        bool ok = e.input_index > 0 ? e.input_index <= input_count : (e.requires_types & ~allowed) == 0;
        if (ok) {
            out.push_back(InstructionRef{static_cast<std::uint16_t>(i)});
        }
    }
    return out;
}

} // namespace novlex

#include "novlex/problems.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "novlex/errors.hpp"

namespace novlex {

namespace {

using Inputs = std::vector<Value>;

constexpr auto I = DataType::integer;
constexpr auto F = DataType::floating;
constexpr auto B = DataType::boolean;
constexpr auto S = DataType::string;
constexpr auto VI = DataType::vector_integer;
constexpr auto VF = DataType::vector_float;

const std::string& str(std::span<const Value> in, std::size_t i) { return std::get<std::string>(in[i]); }
const IntVector& ivec(std::span<const Value> in, std::size_t i) { return std::get<IntVector>(in[i]); }

std::int64_t rand_int(Rng& rng, std::int64_t lo, std::int64_t hi)
{
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::size_t rand_size(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

char pick(Rng& rng, std::string_view alphabet)
{
    return alphabet[uniform_index(rng, alphabet.size())];
}

std::string visible_string(Rng& rng, std::size_t len)
{
    std::string s;
    for (std::size_t i = 0; i < len; ++i) {
        s += static_cast<char>(rand_int(rng, 32, 126));
    }
    return s;
}

IntVector int_vector(Rng& rng, std::size_t len, std::int64_t lo, std::int64_t hi)
{
    IntVector v(len);
    for (auto& x : v) {
        x = rand_int(rng, lo, hi);
    }
    return v;
}

constexpr std::string_view letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
constexpr std::string_view lowercase = "abcdefghijklmnopqrstuvwxyz";
constexpr std::string_view punctuation = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

// ---- problem definitions ----------------------------------------------------------

std::vector<InstructionRef> subset(TypeMask allowed, std::size_t inputs)
{
    return InstructionRegistry::builtin().select(allowed, inputs);
}

ProblemSpec echo_smoke()
{
    ProblemSpec p;
    p.name = "echo-smoke";
    p.input_schema = {I};
    p.output_schema = {OutputKind::integer};
    p.distance = DistanceKind::manhattan;
    p.atoms = {subset(types(I, B), 1), {Erc::integer}, {}};
    p.edge_inputs = {{std::int64_t{0}}, {std::int64_t{1}}, {std::int64_t{-1}}, {std::int64_t{100}}, {std::int64_t{-100}}};
    p.random_input = [](Rng& rng) { return Inputs{rand_int(rng, -10000, 10000)}; };
    p.solve = [](std::span<const Value> in) { return Inputs{in[0]}; };
    return p;
}

ProblemSpec compare_string_lengths()
{
    ProblemSpec p;
    p.name = "csl";
    p.input_schema = {S, S, S};
    p.output_schema = {OutputKind::boolean};
    p.distance = DistanceKind::hamming_equality;
    p.atoms = {subset(types(S, I, B), 3), {Erc::integer, Erc::boolean, Erc::string}, {}};
    for (auto [a, b, c] : std::vector<std::array<const char*, 3>>{{"", "", ""},
                                                                  {"a", "", ""},
                                                                  {"", "a", ""},
                                                                  {"", "", "a"},
                                                                  {"", "a", "bc"},
                                                                  {"a", "bc", "def"},
                                                                  {"abc", "bc", "c"},
                                                                  {"abc", "abc", "abc"},
                                                                  {"", "ab", "a"},
                                                                  {"a", "ab", "ab"}}) {
        p.edge_inputs.push_back({std::string(a), std::string(b), std::string(c)});
    }
    p.random_input = [](Rng& rng) {
        std::array<std::size_t, 3> lens{rand_size(rng, 0, 49), rand_size(rng, 0, 49), rand_size(rng, 0, 49)};
        if (coin(rng, 0.5)) {
            std::sort(lens.begin(), lens.end());
        }
        return Inputs{visible_string(rng, lens[0]), visible_string(rng, lens[1]), visible_string(rng, lens[2])};
    };
    p.solve = [](std::span<const Value> in) {
        bool ok = str(in, 0).size() < str(in, 1).size() && str(in, 1).size() < str(in, 2).size();
        return Inputs{ok};
    };
    return p;
}

ProblemSpec double_letters()
{
    ProblemSpec p;
    p.name = "double-letters";
    p.input_schema = {S};
    p.output_schema = {OutputKind::printed};
    p.distance = DistanceKind::hamming_equality;
    p.atoms = {subset(static_cast<TypeMask>(types(S, I, B) | print_bit), 1),
               {Erc::integer, Erc::character},
               {std::string("!")}};
    for (const char* s : {"", "A", "!", " ", "*", "Hi!", "a!b", "!!", "ZZZ", "?x 9"}) {
        p.edge_inputs.push_back({std::string(s)});
    }
    p.random_input = [](Rng& rng) {
        auto len = rand_size(rng, 0, 20);
        std::string s;
        for (std::size_t i = 0; i < len; ++i) {
            double u = std::uniform_real_distribution<double>(0, 1)(rng);
            s += u < 0.6 ? pick(rng, letters) : u < 0.75 ? '!' : u < 0.85 ? ' ' : static_cast<char>(rand_int(rng, 33, 64));
        }
        return Inputs{s};
    };
    p.solve = [](std::span<const Value> in) {
        std::string out;
        for (char c : str(in, 0)) {
            int reps = std::isalpha(static_cast<unsigned char>(c)) ? 2 : c == '!' ? 3 : 1;
            out.append(static_cast<std::size_t>(reps), c);
        }
        return Inputs{out};
    };
    return p;
}

ProblemSpec last_index_of_zero()
{
    ProblemSpec p;
    p.name = "last-index-of-zero";
    p.input_schema = {VI};
    p.output_schema = {OutputKind::integer};
    p.distance = DistanceKind::manhattan;
    p.atoms = {subset(types(VI, I, B), 1), {Erc::integer}, {std::int64_t{0}}};
    for (IntVector v : std::vector<IntVector>{{0}, {0, 0}, {0, 1}, {1, 0}, {0, 5, 0}, {-5, 0, 3}, {7, 7, 0, 7}, {0, 0, 0, 9}}) {
        p.edge_inputs.push_back({v});
    }
    p.random_input = [](Rng& rng) {
        auto v = int_vector(rng, rand_size(rng, 1, 50), -50, 50);
        auto zeros = rand_size(rng, 1, std::min<std::size_t>(3, v.size()));
        for (std::size_t z = 0; z < zeros; ++z) {
            v[uniform_index(rng, v.size())] = 0;
        }
        return Inputs{v};
    };
    p.solve = [](std::span<const Value> in) {
        const auto& v = ivec(in, 0);
        auto it = std::find(v.rbegin(), v.rend(), 0);
        return Inputs{static_cast<std::int64_t>(v.rend() - it - 1)};
    };
    return p;
}

ProblemSpec mirror_image()
{
    ProblemSpec p;
    p.name = "mirror-image";
    p.input_schema = {VI, VI};
    p.output_schema = {OutputKind::boolean};
    p.distance = DistanceKind::hamming_equality;
    p.atoms = {subset(types(VI, I, B), 2), {Erc::boolean}, {}};
    for (auto [a, b] : std::vector<std::pair<IntVector, IntVector>>{{{}, {}},
                                                                     {{1}, {1}},
                                                                     {{0}, {1}},
                                                                     {{1}, {0}},
                                                                     {{16, -2}, {-2, 16}},
                                                                     {{1, 2}, {1, 2}},
                                                                     {{1, 2, 1}, {1, 2, 1}},
                                                                     {{5, 4, 3}, {3, 4, 5}},
                                                                     {{3, 4, 5}, {3, 4, 5}},
                                                                     {{7, 8}, {8}}}) {
        p.edge_inputs.push_back({a, b});
    }
    p.random_input = [](Rng& rng) {
        auto a = int_vector(rng, rand_size(rng, 1, 50), -1000, 1000);
        IntVector b(a.rbegin(), a.rend());
        switch (rand_int(rng, 0, 3)) {
        case 0:
        case 1: break;
        case 2: b[uniform_index(rng, b.size())] += rand_int(rng, 1, 1000) * (coin(rng, 0.5) ? 1 : -1); break;
        default: b = int_vector(rng, a.size(), -1000, 1000); break;
        }
        return Inputs{a, b};
    };
    p.solve = [](std::span<const Value> in) {
        const auto& a = ivec(in, 0);
        const auto& b = ivec(in, 1);
        return Inputs{a.size() == b.size() && std::equal(a.begin(), a.end(), b.rbegin())};
    };
    return p;
}

ProblemSpec negative_to_zero()
{
    ProblemSpec p;
    p.name = "negative-to-zero";
    p.input_schema = {VI};
    p.output_schema = {OutputKind::vector_integer};
    p.distance = DistanceKind::unsupported;
    p.atoms = {subset(types(VI, I, B), 1), {Erc::integer}, {std::int64_t{0}, IntVector{}}};
    for (IntVector v : std::vector<IntVector>{{}, {-10}, {-1}, {0}, {1}, {10}, {0, 0}, {0, -1}, {-90, -6}, {-16, 33}, {412, 111}}) {
        p.edge_inputs.push_back({v});
    }
    p.random_input = [](Rng& rng) { return Inputs{int_vector(rng, rand_size(rng, 0, 50), -1000, 1000)}; };
    p.solve = [](std::span<const Value> in) {
        IntVector v = ivec(in, 0);
        for (auto& x : v) {
            x = std::max<std::int64_t>(x, 0);
        }
        return Inputs{v};
    };
    return p;
}

ProblemSpec replace_space_with_newline()
{
    ProblemSpec p;
    p.name = "rswn";
    p.input_schema = {S};
    p.output_schema = {OutputKind::printed, OutputKind::integer};
    p.distance = DistanceKind::hamming_equality;
    p.atoms = {subset(static_cast<TypeMask>(types(S, I, B) | print_bit), 1),
               {Erc::character, Erc::string},
               {std::string(" "), std::string("\n")}};
    for (const char* s : {"", "A", "*", " ", "s", "B ", "  ", " D", "ef", "!!", " F ", "T L", "4ps", "q  ", "   ", "  e", "hi "}) {
        p.edge_inputs.push_back({std::string(s)});
    }
    p.random_input = [](Rng& rng) {
        auto len = rand_size(rng, 0, 20);
        std::string s;
        for (std::size_t i = 0; i < len; ++i) {
            s += coin(rng, 0.2) ? ' ' : static_cast<char>(rand_int(rng, 33, 126));
        }
        return Inputs{s};
    };
    p.solve = [](std::span<const Value> in) {
        std::string printed = str(in, 0);
        std::replace(printed.begin(), printed.end(), ' ', '\n');
        auto count = std::count_if(printed.begin(), printed.end(), [](char c) { return c != '\n'; });
        return Inputs{printed, static_cast<std::int64_t>(count)};
    };
    return p;
}

constexpr std::array<int, 26> scrabble_letter_values{1, 3, 3, 2, 1, 4, 2, 4, 1, 8, 5, 1, 3,
                                                     1, 1, 3, 10, 1, 1, 1, 1, 4, 4, 8, 4, 10};

// Indexed by character code; non-letters score 0.
IntVector scrabble_table()
{
    IntVector t(128, 0);
    for (int c = 0; c < 26; ++c) {
        t[static_cast<std::size_t>('a' + c)] = scrabble_letter_values[static_cast<std::size_t>(c)];
        t[static_cast<std::size_t>('A' + c)] = scrabble_letter_values[static_cast<std::size_t>(c)];
    }
    return t;
}

ProblemSpec scrabble_score()
{
    ProblemSpec p;
    p.name = "scrabble-score";
    p.input_schema = {S};
    p.output_schema = {OutputKind::integer};
    p.distance = DistanceKind::manhattan;
    p.atoms = {subset(types(S, I, B, VI), 1), {Erc::integer}, {scrabble_table()}};
    for (const char* s : {"", "a", "A", "q", "Q", "z", "zzz", "!", "hello world", "QuIz", "jukebox"}) {
        p.edge_inputs.push_back({std::string(s)});
    }
    p.random_input = [](Rng& rng) {
        auto len = rand_size(rng, 0, 20);
        std::string s;
        for (std::size_t i = 0; i < len; ++i) {
            s += coin(rng, 0.85) ? pick(rng, letters) : static_cast<char>(rand_int(rng, 32, 64));
        }
        return Inputs{s};
    };
    p.solve = [](std::span<const Value> in) {
        std::int64_t score = 0;
        for (char c : str(in, 0)) {
            auto lower = std::tolower(static_cast<unsigned char>(c));
            if (lower >= 'a' && lower <= 'z') {
                score += scrabble_letter_values[static_cast<std::size_t>(lower - 'a')];
            }
        }
        return Inputs{score};
    };
    return p;
}

ProblemSpec syllables()
{
    ProblemSpec p;
    p.name = "syllables";
    p.input_schema = {S};
    p.output_schema = {OutputKind::printed};
    p.distance = DistanceKind::hamming_equality;
    p.atoms = {subset(static_cast<TypeMask>(types(S, I, B) | print_bit), 1),
               {Erc::integer, Erc::character},
               {std::string("The number of syllables is "), std::string("aeiouy"), std::string("a"),
                std::string("e"), std::string("i"), std::string("o"), std::string("u"), std::string("y")}};
    for (const char* s : {"", "a", "v", "4", "o", " ", "aei", "ouy", "chf", "quite", "a few words", "why", "yyy"}) {
        p.edge_inputs.push_back({std::string(s)});
    }
    p.random_input = [](Rng& rng) {
        auto len = rand_size(rng, 0, 20);
        std::string s;
        for (std::size_t i = 0; i < len; ++i) {
            double u = std::uniform_real_distribution<double>(0, 1)(rng);
            s += u < 0.3 ? pick(rng, "aeiouy") : u < 0.75 ? pick(rng, lowercase) : u < 0.9 ? ' ' : pick(rng, "0123456789!?.,");
        }
        return Inputs{s};
    };
    p.solve = [](std::span<const Value> in) {
        const auto& s = str(in, 0);
        auto n = std::count_if(s.begin(), s.end(), [](char c) { return std::string_view("aeiouy").find(c) != std::string_view::npos; });
        return Inputs{"The number of syllables is " + std::to_string(n)};
    };
    return p;
}

ProblemSpec vector_average()
{
    ProblemSpec p;
    p.name = "vector-average";
    p.input_schema = {VF};
    p.output_schema = {OutputKind::floating};
    p.distance = DistanceKind::manhattan;
    p.float_tolerance = 1e-4;
    p.atoms = {subset(types(VF, F, I), 1), {Erc::floating}, {}};
    for (FloatVector v : std::vector<FloatVector>{{0.0},
                                                  {100.0},
                                                  {-100.0},
                                                  {1000.0},
                                                  {-1000.0},
                                                  {2.0, 129.0},
                                                  {0.12345, -4.678},
                                                  {999.99, 74.113},
                                                  {987.654321, 995.0003},
                                                  {-788.788, -812.19}}) {
        p.edge_inputs.push_back({v});
    }
    p.random_input = [](Rng& rng) {
        FloatVector v(rand_size(rng, 1, 50));
        for (auto& x : v) {
            x = std::uniform_real_distribution<double>(-1000.0, 1000.0)(rng);
        }
        return Inputs{v};
    };
    p.solve = [](std::span<const Value> in) {
        const auto& v = std::get<FloatVector>(in[0]);
        return Inputs{std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size())};
    };
    return p;
}

ProblemSpec x_word_lines()
{
    ProblemSpec p;
    p.name = "x-word-lines";
    p.input_schema = {S, I};
    p.output_schema = {OutputKind::printed};
    p.distance = DistanceKind::hamming_equality;
    p.atoms = {subset(static_cast<TypeMask>(types(S, I, B) | print_bit), 2),
               {Erc::integer, Erc::character},
               {std::string("\n"), std::string(" ")}};
    for (auto [s, x] : std::vector<std::pair<const char*, std::int64_t>>{{"a", 1},
                                                                          {"a", 10},
                                                                          {"a b", 1},
                                                                          {"a b", 2},
                                                                          {"a b", 3},
                                                                          {"a b c d", 2},
                                                                          {"hello world", 1},
                                                                          {"one  two\nthree", 2},
                                                                          {"x y z w v u", 4}}) {
        p.edge_inputs.push_back({std::string(s), x});
    }
    p.random_input = [](Rng& rng) {
        auto words = rand_size(rng, 1, 20);
        std::string s;
        for (std::size_t w = 0; w < words; ++w) {
            if (w > 0) {
                double u = std::uniform_real_distribution<double>(0, 1)(rng);
                s += u < 0.85 ? " " : u < 0.93 ? "  " : "\n";
            }
            auto len = rand_size(rng, 1, 8);
            for (std::size_t i = 0; i < len; ++i) {
                s += coin(rng, 0.9) ? pick(rng, letters) : pick(rng, punctuation);
            }
        }
        return Inputs{s, rand_int(rng, 1, 10)};
    };
    p.solve = [](std::span<const Value> in) {
        const auto& s = str(in, 0);
        auto x = static_cast<std::size_t>(std::get<std::int64_t>(in[1]));
        std::vector<std::string> words;
        std::string current;
        for (char c : s) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!current.empty()) {
                    words.push_back(std::move(current));
                    current.clear();
                }
            } else {
                current += c;
            }
        }
        if (!current.empty()) {
            words.push_back(std::move(current));
        }
        std::string out;
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (i > 0) {
                out += i % x == 0 ? '\n' : ' ';
            }
            out += words[i];
        }
        return Inputs{out};
    };
    return p;
}

constexpr std::array<std::string_view, 11> names{"csl",          "double-letters", "last-index-of-zero", "mirror-image",
                                                 "negative-to-zero", "rswn",       "scrabble-score",     "syllables",
                                                 "vector-average",   "x-word-lines", "echo-smoke"};

DataType data_type_of(OutputKind k)
{
    switch (k) {
    case OutputKind::boolean: return B;
    case OutputKind::integer: return I;
    case OutputKind::floating: return F;
    case OutputKind::vector_integer: return VI;
    case OutputKind::printed: return S;
    }
    return I;
}

} // namespace

std::span<const std::string_view> problem_names()
{
    return names;
}

ProblemSpec build_problem(std::string_view name)
{
    if (name == "csl") return compare_string_lengths();
    if (name == "double-letters") return double_letters();
    if (name == "last-index-of-zero") return last_index_of_zero();
    if (name == "mirror-image") return mirror_image();
    if (name == "negative-to-zero") return negative_to_zero();
    if (name == "rswn") return replace_space_with_newline();
    if (name == "scrabble-score") return scrabble_score();
    if (name == "syllables") return syllables();
    if (name == "vector-average") return vector_average();
    if (name == "x-word-lines") return x_word_lines();
    if (name == "echo-smoke") return echo_smoke();
    throw ConfigError("unknown problem '" + std::string(name) + "'");
}

// ---- cases ----------------------------------------------------------------------

namespace {

std::string input_key(const std::vector<Value>& inputs)
{
    std::string key;
    for (const auto& v : inputs) {
        key += format_value(v);
        key += '\x1f';
    }
    return key;
}

TestCase make_case(const ProblemSpec& spec, std::vector<Value> inputs)
{
    auto expected = spec.solve(inputs);
    return TestCase{std::move(inputs), std::move(expected)};
}

} // namespace

CaseSets generate_cases(const ProblemSpec& spec, Rng& rng)
{
    CaseSets sets;
    std::set<std::string> seen;
    for (const auto& in : spec.edge_inputs) {
        if (sets.train.size() < spec.train_count && seen.insert(input_key(in)).second) {
            sets.train.push_back(make_case(spec, in));
        }
    }
    constexpr std::size_t max_attempts = 1'000'000;
    std::size_t attempts = 0;
    auto fill = [&](std::vector<TestCase>& target, std::size_t count) {
        while (target.size() < count) {
            if (++attempts > max_attempts) {
                throw ConfigError(spec.name + ": cannot generate enough distinct cases");
            }
            auto in = spec.random_input(rng);
            if (seen.insert(input_key(in)).second) {
                target.push_back(make_case(spec, std::move(in)));
            }
        }
    };
    fill(sets.train, spec.train_count);
    fill(sets.test, spec.test_count);
    return sets;
}

// ---- behavior and error -------------------------------------------------------------

CaseOutput case_output(const ProblemSpec& spec, const VmState& state)
{
    CaseOutput out;
    out.reserve(spec.output_schema.size());
    for (auto kind : spec.output_schema) {
        switch (kind) {
        case OutputKind::boolean:
            out.push_back(state.boolean.empty() ? Output{NoOutput{}} : Output{static_cast<bool>(state.boolean.back())});
            break;
        case OutputKind::integer:
            out.push_back(state.integer.empty() ? Output{NoOutput{}} : Output{state.integer.back()});
            break;
        case OutputKind::floating:
            out.push_back(state.floating.empty() ? Output{NoOutput{}} : Output{state.floating.back()});
            break;
        case OutputKind::vector_integer:
            out.push_back(state.vector_integer.empty() ? Output{NoOutput{}} : Output{state.vector_integer.back()});
            break;
        case OutputKind::printed: out.push_back(Output{state.print_buffer}); break;
        }
    }
    return out;
}

Behavior behavior_of(const ProblemSpec& spec, std::span<const VmState> outcomes)
{
    Behavior b;
    b.reserve(outcomes.size());
    for (const auto& s : outcomes) {
        b.push_back(case_output(spec, s));
    }
    return b;
}

std::size_t levenshtein(std::string_view a, std::string_view b)
{
    if (a.size() < b.size()) {
        std::swap(a, b);
    }
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

namespace {

double component_error(OutputKind kind, const Output& produced, const Value& expected, double tolerance)
{
    if (std::holds_alternative<NoOutput>(produced)) {
        return no_output_penalty;
    }
    switch (kind) {
    case OutputKind::boolean: return std::get<bool>(produced) == std::get<bool>(expected) ? 0.0 : 1.0;
    case OutputKind::integer:
        return std::abs(static_cast<double>(std::get<std::int64_t>(produced)) -
                        static_cast<double>(std::get<std::int64_t>(expected)));
    case OutputKind::floating: {
        double e = std::abs(std::get<double>(produced) - std::get<double>(expected));
        return e < tolerance ? 0.0 : e;
    }
    case OutputKind::vector_integer: {
        const auto& out = std::get<IntVector>(produced);
        const auto& want = std::get<IntVector>(expected);
        auto common = std::min(out.size(), want.size());
        double e = 0.0;
        for (std::size_t i = 0; i < common; ++i) {
            e += std::abs(static_cast<double>(out[i]) - static_cast<double>(want[i]));
        }
        auto extra = std::max(out.size(), want.size()) - common;
        return e + vector_length_penalty * static_cast<double>(extra);
    }
    case OutputKind::printed:
        return static_cast<double>(levenshtein(std::get<std::string>(produced), std::get<std::string>(expected)));
    }
    return no_output_penalty;
}

} // namespace

double case_error(const ProblemSpec& spec, const CaseOutput& produced, const TestCase& expected)
{
    double e = 0.0;
    for (std::size_t k = 0; k < spec.output_schema.size(); ++k) {
        e += component_error(spec.output_schema[k], produced[k], expected.expected[k], spec.float_tolerance);
    }
    return e;
}

ErrorVector errors_of(const ProblemSpec& spec, const Behavior& behavior, std::span<const TestCase> cases)
{
    if (behavior.size() != cases.size()) {
        throw UsageError("errors_of: behavior length differs from case count");
    }
    ErrorVector errors(cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) {
        errors[i] = case_error(spec, behavior[i], cases[i]);
    }
    return errors;
}

std::string_view output_kind_name(OutputKind k) noexcept
{
    switch (k) {
    case OutputKind::boolean: return "boolean";
    case OutputKind::integer: return "integer";
    case OutputKind::floating: return "float";
    case OutputKind::vector_integer: return "vector_integer";
    case OutputKind::printed: return "printed";
    }
    return "?";
}

std::string_view distance_kind_name(DistanceKind k) noexcept
{
    switch (k) {
    case DistanceKind::hamming_equality: return "hamming-equality";
    case DistanceKind::manhattan: return "manhattan";
    case DistanceKind::unsupported: return "unsupported";
    }
    return "?";
}

std::string format_output(const Output& o)
{
    return std::visit(
        []<class T>(const T& x) -> std::string {
            if constexpr (std::is_same_v<T, NoOutput>) {
                return "NO-OUTPUT";
            } else {
                return format_value(Value{x});
            }
        },
        o);
}

// ---- case files ---------------------------------------------------------------------

namespace {

using nlohmann::json;

json to_json(const Value& v)
{
    return std::visit([](const auto& x) { return json(x); }, v);
}

Value from_json(const json& j, DataType t)
{
    switch (t) {
    case DataType::integer: return j.get<std::int64_t>();
    case DataType::floating: return j.get<double>();
    case DataType::boolean: return j.get<bool>();
    case DataType::string: return j.get<std::string>();
    case DataType::vector_integer: return j.get<IntVector>();
    case DataType::vector_float: return j.get<FloatVector>();
    case DataType::exec: break;
    }
    throw std::invalid_argument("case file: exec values are not data");
}

} // namespace

void write_cases(std::ostream& out, std::span<const TestCase> cases)
{
    for (const auto& c : cases) {
        json inputs = json::array();
        json expected = json::array();
        for (const auto& v : c.inputs) {
            inputs.push_back(to_json(v));
        }
        for (const auto& v : c.expected) {
            expected.push_back(to_json(v));
        }
        out << json{{"inputs", inputs}, {"expected", expected}}.dump() << '\n';
    }
}

std::vector<TestCase> read_cases(std::istream& in, const ProblemSpec& spec)
{
    std::vector<TestCase> cases;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            auto j = json::parse(line);
            const auto& inputs = j.at("inputs");
            const auto& expected = j.at("expected");
            if (inputs.size() != spec.input_schema.size() || expected.size() != spec.output_schema.size()) {
                throw std::invalid_argument("arity mismatch");
            }
            TestCase c;
            for (std::size_t k = 0; k < inputs.size(); ++k) {
                c.inputs.push_back(from_json(inputs[k], spec.input_schema[k]));
            }
            for (std::size_t k = 0; k < expected.size(); ++k) {
                c.expected.push_back(from_json(expected[k], data_type_of(spec.output_schema[k])));
            }
            cases.push_back(std::move(c));
        } catch (const std::exception& e) {
            throw std::invalid_argument("case file line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cases;
}

} // namespace novlex

#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "novlex/genome.hpp"
#include "novlex/random.hpp"
#include "novlex/value.hpp"
#include "novlex/vm.hpp"

namespace novlex {

/// What a program must produce for one output component.
enum class OutputKind : std::uint8_t { boolean, integer, floating, vector_integer, printed };

enum class DistanceKind : std::uint8_t { hamming_equality, manhattan, unsupported };

/// Marker for an output stack that was empty at the end of execution.
struct NoOutput {
    friend bool operator==(NoOutput, NoOutput) = default;
};

using Output = std::variant<NoOutput, std::int64_t, double, bool, std::string, IntVector>;

/// One entry per output component of a single test case.
using CaseOutput = std::vector<Output>;

/// A program's outputs over every training case.
using Behavior = std::vector<CaseOutput>;

using ErrorVector = std::vector<double>;

struct TestCase {
    std::vector<Value> inputs;
    std::vector<Value> expected;

    friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct CaseSets {
    std::vector<TestCase> train;
    std::vector<TestCase> test;
};

/// Error charged when a required output stack is empty.
inline constexpr double no_output_penalty = 1'000'000.0;

/// Per-element penalty for integer-vector outputs of the wrong length.
inline constexpr double vector_length_penalty = 10'000.0;

struct ProblemSpec {
    std::string name;
    std::vector<DataType> input_schema;
    std::vector<OutputKind> output_schema;
    std::size_t train_count = 100;
    std::size_t test_count = 300;
    DistanceKind distance = DistanceKind::hamming_equality;
    /// Float outputs within this distance of the expected value score zero.
    double float_tolerance = 0.0;

    AtomSet atoms;

    /// Fixed inputs always placed in the training set.
    std::vector<std::vector<Value>> edge_inputs;
    std::function<std::vector<Value>(Rng&)> random_input;
    /// Correct outputs for an input, one Value per output component.
    std::function<std::vector<Value>(std::span<const Value>)> solve;
};

/// Names accepted by build_problem, in presentation order.
std::span<const std::string_view> problem_names();

/// Throws ConfigError for unknown names.
ProblemSpec build_problem(std::string_view name);

/// Edge cases first, then random cases. Train and test inputs are disjoint.
CaseSets generate_cases(const ProblemSpec& spec, Rng& rng);

CaseOutput case_output(const ProblemSpec& spec, const VmState& state);
Behavior behavior_of(const ProblemSpec& spec, std::span<const VmState> outcomes);

double case_error(const ProblemSpec& spec, const CaseOutput& produced, const TestCase& expected);
ErrorVector errors_of(const ProblemSpec& spec, const Behavior& behavior, std::span<const TestCase> cases);

std::size_t levenshtein(std::string_view a, std::string_view b);

std::string_view output_kind_name(OutputKind k) noexcept;
std::string_view distance_kind_name(DistanceKind k) noexcept;

/// One JSON object per line: {"inputs": [...], "expected": [...]}.
void write_cases(std::ostream& out, std::span<const TestCase> cases);
/// Throws std::invalid_argument on records that do not match the schema.
std::vector<TestCase> read_cases(std::istream& in, const ProblemSpec& spec);

std::string format_output(const Output& o);

} // namespace novlex

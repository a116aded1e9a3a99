#pragma once

#include <stdexcept>
#include <string>

namespace novlex {

/// Invalid configuration: unknown problem, empty instruction set, bad rates.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called outside its contract (empty population, wrong arity).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The requested selection strategy has no behavior distance for this problem.
class StrategyUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace novlex

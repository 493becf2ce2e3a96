#pragma once

#include <stdexcept>
#include <string>

namespace rlsc {

// Caller violated a documented precondition.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical routine could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Experiment configuration is malformed or out of range.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ContractError(what);
}

} // namespace rlsc

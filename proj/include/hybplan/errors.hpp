#pragma once

#include <stdexcept>
#include <string>

namespace hybplan {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionViolated : Error {
    explicit PreconditionViolated(const std::string& action)
        : Error("precondition violated: " + action) {}
};

struct ConflictingPair : Error {
    ConflictingPair(const std::string& a, const std::string& b)
        : Error("conflicting actions in one step: " + a + " / " + b) {}
};

struct EmptyInput : Error {
    using Error::Error;
};

struct InvalidInstance : Error {
    using Error::Error;
};

struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& what_)
        : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

struct PrecomputationUnsupported : Error {
    explicit PrecomputationUnsupported(const std::string& module)
        : Error("module does not support input-space enumeration: " + module) {}
};

struct CheckUnavailable : Error {
    using Error::Error;
};

struct GenerationExhausted : Error {
    using Error::Error;
};

} // namespace hybplan

#pragma once

#include <stdexcept>
#include <string>

namespace nasinit {

/// Root of every error the library raises. `kind()` names the failure class
/// so callers (and the CLI exit-code mapping) can dispatch without RTTI games.
class Error : public std::runtime_error {
public:
    enum class Kind {
        Structural,          // malformed input shape
        InvalidArchitecture, // no input->output path, limits exceeded
        Sampling,            // rejection sampler ran out of attempts
        Mutation,            // no admissible mutation
        Parameter,           // caller passed an out-of-range argument
        Parse,               // unreadable input file
        Validation,          // well-formed but semantically invalid data
        MissingArchitecture, // closed-world benchmark lookup miss
        UndefinedMetric,     // metric not defined for this labeling
        EmptyResult,         // nothing to return
        Runtime,
    };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

#define NASINIT_DEFINE_ERROR(Name, K)                                      \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(Kind::K, what) {}   \
    }

NASINIT_DEFINE_ERROR(StructuralError, Structural);
NASINIT_DEFINE_ERROR(InvalidArchitectureError, InvalidArchitecture);
NASINIT_DEFINE_ERROR(SamplingError, Sampling);
NASINIT_DEFINE_ERROR(MutationError, Mutation);
NASINIT_DEFINE_ERROR(ParameterError, Parameter);
NASINIT_DEFINE_ERROR(ValidationError, Validation);
NASINIT_DEFINE_ERROR(MissingArchitectureError, MissingArchitecture);
NASINIT_DEFINE_ERROR(UndefinedMetricError, UndefinedMetric);
NASINIT_DEFINE_ERROR(EmptyResultError, EmptyResult);
NASINIT_DEFINE_ERROR(RuntimeFailure, Runtime);

#undef NASINIT_DEFINE_ERROR

/// Parse failures carry the 1-based line they occurred on.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(Kind::Parse, "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace nasinit

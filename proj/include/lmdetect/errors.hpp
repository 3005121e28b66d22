#pragma once

#include <stdexcept>
#include <string>

namespace lmd {

// Malformed input text (log lines, JSON documents).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structurally valid input that violates a domain invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad run parameters (flags, schedules, thresholds).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Wraps a failure with the pipeline stage it occurred in.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message)
        : std::runtime_error("[" + stage + "] " + message), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace lmd

#pragma once

#include <stdexcept>
#include <string>

namespace bpsgcn {

/// Invalid caller-supplied argument (shape mismatch, bad range, ...).
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    explicit ParseError(const std::string& what) : std::runtime_error(what), line_(-1) {}
    long line() const { return line_; }

private:
    long line_;
};

/// Non-finite values where finite ones are required.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation issued against an object in the wrong state (empty repo, missing run dir, ...).
class StateError : public std::runtime_error {
public:
    explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

/// Training diverged. `last_good` names the most recent usable checkpoint, may be empty.
class TrainingError : public std::runtime_error {
public:
    TrainingError(const std::string& what, std::string last_good)
        : std::runtime_error(what), last_good_(std::move(last_good)) {}
    const std::string& last_good_checkpoint() const { return last_good_; }

private:
    std::string last_good_;
};

} // namespace bpsgcn

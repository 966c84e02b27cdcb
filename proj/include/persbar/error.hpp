#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace persbar {

/// Precondition on an argument violated (bad level, bad grid, eps <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A series did not reach the requested tolerance within its term cap.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double partial, long terms)
        : std::runtime_error(what), partial_(partial), terms_(terms) {}
    double partial() const noexcept { return partial_; }
    long terms() const noexcept { return terms_; }

private:
    double partial_;
    long terms_;
};

/// A Monte Carlo check saw too few events to say anything.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad experiment configuration. `key()` is the offending `section.key`.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Numerical breakdown that valid input should never reach.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace persbar

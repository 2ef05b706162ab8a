#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polyreg {

/// Base class for every error thrown by polyreg.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vector or matrix shapes that do not agree.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Malformed monomial or model (duplicate monomial, index out of range, degree bound exceeded).
class ModelError : public Error {
public:
    using Error::Error;
};

/// The (penalized) Gram matrix is singular or its condition estimate exceeds the threshold.
class RankDeficient : public Error {
public:
    RankDeficient(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Problem too large for the exhaustive LASSO oracle.
class TooLarge : public Error {
public:
    using Error::Error;
};

/// Malformed input file. Reads as `source:line: message`; the line is
/// 1-based and omitted when 0.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, const std::string& source = {})
        : Error(compose(message, line, source)), message_(message), line_(line), source_(source) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& message() const noexcept { return message_; }
    const std::string& source() const noexcept { return source_; }

    ParseError with_source(const std::string& source) const {
        return ParseError(message_, line_, source);
    }

private:
    static std::string compose(const std::string& message, std::size_t line,
                               const std::string& source) {
        std::string out = source.empty() ? (line > 0 ? "line" : "") : source;
        if (line > 0) out += (source.empty() ? " " : ":") + std::to_string(line);
        return out.empty() ? message : out + ": " + message;
    }

    std::string message_;
    std::size_t line_;
    std::string source_;
};

/// Inconsistent run configuration (unknown selector, mixed L1/L2 penalties, method mismatch).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace polyreg

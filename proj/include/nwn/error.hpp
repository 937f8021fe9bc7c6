#pragma once

#include <stdexcept>
#include <string>

namespace nwn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (TSV/CSV/prefix lines, JSON documents).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    explicit ParseError(const std::string& what) : Error(what), line_(0) {}

    /// 1-based line or row number, 0 when unknown.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ConfigError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };
class SplitError : public Error { using Error::Error; };
class VocabularyError : public Error { using Error::Error; };
class FitError : public Error { using Error::Error; };
class TrainingError : public Error { using Error::Error; };
class DataError : public Error { using Error::Error; };
class MetricError : public Error { using Error::Error; };
class VersionError : public Error { using Error::Error; };

}  // namespace nwn

#pragma once

#include <stdexcept>
#include <string>

namespace pmibias {

/// Invalid user configuration: overlapping word sets, bad flag values, bad study files.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file was readable but its content does not follow the expected layout.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric argument outside its valid domain.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A contingency cell is zero and no smoothing was requested.
class DegenerateCellError : public std::domain_error {
public:
    DegenerateCellError(std::string cell, const std::string& what)
        : std::domain_error(what), cell_(std::move(cell)) {}

    const std::string& cell() const noexcept { return cell_; }

private:
    std::string cell_;
};

/// A target set has no co-occurrence events at all.
class NoTargetEventsError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// No member of a context set is part of the vocabulary.
class UndefinedContextError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Correlation requested on a variable with zero variance.
class UndefinedCorrelationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace pmibias

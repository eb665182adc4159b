#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rss {

/// Raised by validate_dataset for the first record that breaks the Dataset invariants.
class ValidationError : public std::runtime_error {
public:
    enum class Kind { NotSorted, DuplicateKey, ForbiddenByte };

    ValidationError(Kind kind, std::size_t index, std::size_t offset = 0);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t index() const noexcept { return index_; }
    /// Byte offset inside the record; only meaningful for ForbiddenByte.
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    Kind kind_;
    std::size_t index_;
    std::size_t offset_;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The hash corrector stores offsets in signed 8-bit cells.
class ErrorBoundTooLarge : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class EmptyInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace rss

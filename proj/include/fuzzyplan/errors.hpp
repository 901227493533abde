#pragma once

#include <stdexcept>
#include <string>

namespace fuzzyplan {

/// Malformed input text (bad JSON, wrong field types).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed input that breaks a model or configuration invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File system failures; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by fuzzy inference when no rule fires for an output.
class IncompleteRuleBase : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fuzzyplan

#pragma once

#include <stdexcept>
#include <string>

namespace bsdtest {

/// Input outside the mathematical domain of an operation (bad correlation,
/// non-positive variance, out-of-range parameter).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Floating-point breakdown: a pivot, Schur complement or conditional
/// variance that should be positive came out non-positive.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (matrix files, vectors, config).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration; the message names the offending field.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bsdtest

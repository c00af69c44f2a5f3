#pragma once

#include <stdexcept>
#include <string>

namespace jsharp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: bad parameters, malformed grammar, domain mismatch.
/// The CLI maps this family to exit status 2.
class UsageError : public Error {
public:
    using Error::Error;
};

class ParameterError : public UsageError {
public:
    using UsageError::UsageError;
};

class ParseError : public UsageError {
public:
    using UsageError::UsageError;
};

class DomainError : public UsageError {
public:
    using UsageError::UsageError;
};

class EmptyCellError : public UsageError {
public:
    using UsageError::UsageError;
};

/// Numerical failure. The CLI maps this family to exit status 3.
class NumericError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public NumericError {
public:
    using NumericError::NumericError;
};

class LimitUndeterminedError : public NumericError {
public:
    using NumericError::NumericError;
};

class QuadratureError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace jsharp

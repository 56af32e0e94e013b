#pragma once

#include <stdexcept>
#include <string>

namespace qf {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV row, JSON document). Message names the location.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input violates a documented invariant (OHLC ordering, stage order, shapes).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Value outside the mathematical domain of an operation (log of nonpositive, ...).
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Vector/matrix width does not match the expected dimension.
class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Pipeline operation called out of stage order.
class StageError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A cleaning step removed every row of a panel.
class EmptyPanelError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Not enough observations to run the requested estimation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure (missing file, unwritable directory).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace qf

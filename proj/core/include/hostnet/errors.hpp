#pragma once

#include <stdexcept>
#include <string>

namespace hostnet {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad inputs: malformed files, schema violations, inconsistent shapes,
/// invalid configuration. The CLI maps these to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized text (CoNLL-U, model files, JSONL).
class ParseError : public DataError {
 public:
  using DataError::DataError;
};

/// Structurally invalid values: broken head trees, label hierarchy
/// violations, inconsistent record contents.
class StructureError : public DataError {
 public:
  using DataError::DataError;
};

/// Shape disagreement between tensors that must be congruent.
class DimensionError : public DataError {
 public:
  using DataError::DataError;
};

/// Invalid configuration values (vocabulary budgets, component counts...).
class ConfigError : public DataError {
 public:
  using DataError::DataError;
};

/// A piece or symbol id outside the model vocabulary.
class VocabularyError : public DataError {
 public:
  using DataError::DataError;
};

/// Filesystem-level failure (missing file, short read).
class IoError : public DataError {
 public:
  using DataError::DataError;
};

/// Non-finite values where finite arithmetic was required. The CLI maps
/// these to exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace hostnet

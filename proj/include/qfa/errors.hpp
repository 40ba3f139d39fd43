#pragma once

#include <stdexcept>
#include <string>

namespace qfa {

/// Matrix/vector dimension mismatch or non-square input.
struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// A word contains a symbol outside the machine's alphabet.
struct AlphabetError : std::invalid_argument {
  explicit AlphabetError(const std::string& what) : std::invalid_argument(what) {}
};

/// A machine component fails its model's well-formedness constraint
/// (non-stochastic column, non-unitary matrix, bad Kraus family, ...).
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Automaton file could not be parsed; message carries field context.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// The exact scalar domain cannot represent a requested value
/// (e.g. a sum of incommensurable radicals).
struct ExactArithmeticError : std::runtime_error {
  explicit ExactArithmeticError(const std::string& what) : std::runtime_error(what) {}
};

/// A run that provably never halts (e.g. restart machine with no halting mass).
struct NonterminationError : std::runtime_error {
  explicit NonterminationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qfa

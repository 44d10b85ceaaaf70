#pragma once

#include <stdexcept>
#include <string>

namespace ambig {

// Base for every error raised by the library. Callers that only need a
// message can catch this; the subclasses exist so tests and the CLI can
// tell failure modes apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DimensionMismatchError : public ParseError {
 public:
  using ParseError::ParseError;
};

class OutOfVocabularyError : public Error {
 public:
  explicit OutOfVocabularyError(const std::string& word)
      : Error("word not in vocabulary: '" + word + "'"), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class SegmentationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// No (token, word) pair or no in-vocabulary mass was available to score.
class UnscorableError : public Error {
 public:
  using Error::Error;
};

// Raised when the transport solver fails to reach optimality. On a feasible
// balanced instance this indicates a bug, not bad input.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace ambig

#pragma once

#include <stdexcept>
#include <string>

namespace lexsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a configuration value violates an operation precondition
// (fold count, C factor, epsilon and the like).
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class EmptyVocabulary : public Error {
 public:
  using Error::Error;
};

class DegenerateCorpus : public Error {
 public:
  using Error::Error;
};

class OutOfVocabulary : public Error {
 public:
  explicit OutOfVocabulary(const std::string& word)
      : Error("word not in vocabulary: " + word), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class NTooLarge : public Error {
 public:
  using Error::Error;
};

class MalformedModelFile : public Error {
 public:
  MalformedModelFile(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class MalformedDatabase : public Error {
 public:
  MalformedDatabase(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what) {}
  explicit MalformedDatabase(const std::string& what) : Error(what) {}
};

class MissingPosFile : public Error {
 public:
  using Error::Error;
};

class InvalidBounds : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateShape : public Error {
 public:
  using Error::Error;
};

class InsufficientEntries : public Error {
 public:
  using Error::Error;
};

class EmptyGolden : public Error {
 public:
  using Error::Error;
};

class AllKeysOutOfVocabulary : public Error {
 public:
  using Error::Error;
};

}  // namespace lexsim

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace aspectlab {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class FileNotFoundError : public Error {
 public:
  explicit FileNotFoundError(const std::string& path)
      : Error("file not found: " + path), path(path) {}
  std::string path;
};

/// Malformed input line; line numbers are 1-based.
class FormatError : public Error {
 public:
  FormatError(std::uint64_t line, const std::string& reason)
      : Error("format error at line " + std::to_string(line) + ": " + reason),
        line(line),
        reason(reason) {}
  std::uint64_t line;
  std::string reason;
};

class DuplicateClauseIdError : public Error {
 public:
  DuplicateClauseIdError(std::uint64_t line, const std::string& id)
      : Error("duplicate clause_id at line " + std::to_string(line) + ": " + id),
        line(line),
        clause_id(id) {}
  std::uint64_t line;
  std::string clause_id;
};

class UnlabeledRecordError : public Error {
 public:
  explicit UnlabeledRecordError(const std::string& id)
      : Error("record has no gold label: " + id), clause_id(id) {}
  std::string clause_id;
};

class MissingMainVerbError : public Error {
 public:
  explicit MissingMainVerbError(const std::string& id)
      : Error("clause has no usable main verb: " + id), clause_id(id) {}
  std::string clause_id;
};

/// A lemma listed under two adverb classes in a lexicon file.
class DisjointnessViolationError : public Error {
 public:
  explicit DisjointnessViolationError(const std::string& lemma)
      : Error("lemma appears in two adverb classes: " + lemma), lemma(lemma) {}
  std::string lemma;
};

class MissingVectorError : public Error {
 public:
  explicit MissingVectorError(const std::string& lemma)
      : Error("no indicator vector for verb: " + lemma), lemma(lemma) {}
  std::string lemma;
};

class EmptyClassError : public Error {
 public:
  explicit EmptyClassError(const std::string& which)
      : Error("class has no examples: " + which) {}
};

class SampleTooSmallError : public Error {
 public:
  SampleTooSmallError() : Error("each sample needs at least 2 elements") {}
};

class SingleClassTrainingError : public Error {
 public:
  SingleClassTrainingError() : Error("training set contains only one class") {}
};

class EmptyTrainingSetError : public Error {
 public:
  EmptyTrainingSetError() : Error("training set is empty") {}
};

class LengthMismatchError : public Error {
 public:
  explicit LengthMismatchError(const std::string& what) : Error(what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

class SpecError : public Error {
 public:
  explicit SpecError(const std::string& what) : Error(what) {}
};

}  // namespace aspectlab

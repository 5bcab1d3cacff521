#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trendscope {

// Base for every error raised by the library. The CLI maps subclasses to
// exit codes (ConfigError -> 2, everything else inside a stage -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Dictionary and other TSV resources; carries the offending line.
class FormatError : public ParseError {
 public:
  using ParseError::ParseError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class RemoteError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

class BadHyperparameter : public Error {
 public:
  using Error::Error;
};

class VocabMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyGrid : public Error {
 public:
  using Error::Error;
};

class ZeroDocFreq : public Error {
 public:
  using Error::Error;
};

class DimMismatch : public Error {
 public:
  using Error::Error;
};

class TooFewPoints : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class EmptyWindow : public Error {
 public:
  using Error::Error;
};

class BadWindow : public Error {
 public:
  using Error::Error;
};

class TooShort : public Error {
 public:
  using Error::Error;
};

class ConstantSeries : public Error {
 public:
  using Error::Error;
};

class AllFitsFailed : public Error {
 public:
  using Error::Error;
};

class MissingUpstream : public Error {
 public:
  MissingUpstream(const std::string& stage)
      : Error("missing upstream stage '" + stage + "'"), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

class IncompleteManifest : public Error {
 public:
  using Error::Error;
};

// A stage-specific error, prefixed with the stage name.
class StageFailure : public Error {
 public:
  StageFailure(const std::string& stage, const std::string& what)
      : Error(stage + ": " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace trendscope

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace apobs {

enum class ErrorKind {
  Parse,
  Unsupported,       // e.g. a discrete-time operator in a continuous-time formula
  InvalidArgument,
  Chopping,          // signal slice fits none of A/Z/E/N, or two APs change in one slice
  Spec,              // inconsistent system specification
  TauValidation,     // AP-separation / sampling-period bound violated
  Precondition,
  AlphabetMismatch,
  Io,
  Internal,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorKind::Parse, what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

enum class ChoppingFailure { UndefinedSlice, MultiChange, NotRepresentable };

class ChoppingError : public Error {
 public:
  ChoppingError(ChoppingFailure failure, std::size_t slice, const std::string& what)
      : Error(ErrorKind::Chopping, what), failure_(failure), slice_(slice) {}

  ChoppingFailure failure() const noexcept { return failure_; }
  std::size_t slice() const noexcept { return slice_; }

 private:
  ChoppingFailure failure_;
  std::size_t slice_;
};

/// Error raised by a pipeline stage; `stage()` names the stage that failed.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), stage + ": " + cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace apobs

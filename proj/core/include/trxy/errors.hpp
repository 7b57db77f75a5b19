#pragma once

#include <stdexcept>
#include <string>

namespace trxy {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input (expressions, rationals, cache lines, JSON payloads).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  explicit ParseError(const std::string& what) : Error(what), offset_(0) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// A series operation needs more terms than its operands carry.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int achievable)
      : Error(what + " (achievable order " + std::to_string(achievable) + ")"),
        achievable_(achievable) {}
  int achievable() const { return achievable_; }

 private:
  int achievable_;
};

class EmptySeriesError : public Error {
 public:
  using Error::Error;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

// Curve assumption failures. All map to CLI exit code 3.
class CurveError : public Error {
 public:
  using Error::Error;
};

class NonRationalRamification : public CurveError {
 public:
  NonRationalRamification(const std::string& what, std::string factor)
      : CurveError(what), factor_(std::move(factor)) {}
  const std::string& factor() const { return factor_; }

 private:
  std::string factor_;
};

class UnsupportedRamificationProfile : public CurveError {
 public:
  using CurveError::CurveError;
};

class AssumptionViolated : public CurveError {
 public:
  using CurveError::CurveError;
};

class DependencyError : public Error {
 public:
  using Error::Error;
};

class UnsupportedGraph : public Error {
 public:
  using Error::Error;
};

}  // namespace trxy

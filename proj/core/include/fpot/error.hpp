#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fpot {

/// Coarse error categories. The CLI maps these onto its exit codes.
enum class ErrorKind {
  input,                  // malformed user input (bad interval, bad atoms, ...)
  parse,                  // expression syntax or unknown identifier
  domain,                 // argument outside the declared domain of a generator
  evaluation,             // non-finite value while evaluating a function
  accuracy,               // iterative method did not reach its tolerance
  out_of_range,           // inversion target outside the attainable range
  monotonicity,           // function found non-monotone where monotone required
  derivative_degenerate,  // vanishing first derivative where division is needed
  singular_h,             // h vanishes or changes sign inside its domain
  not_applicable,         // operation undefined for this input (e.g. affine f)
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(ErrorKind::parse, what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class DomainError : public Error {
 public:
  DomainError(const std::string& what, double where)
      : Error(ErrorKind::domain, what), where_(where) {}

  double where() const noexcept { return where_; }

 private:
  double where_;
};

/// Non-finite evaluation. Carries the abscissa and, for expressions, the byte
/// offset of the offending node.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::optional<double> abscissa = std::nullopt,
                  std::optional<std::size_t> offset = std::nullopt)
      : Error(ErrorKind::evaluation, what), abscissa_(abscissa), offset_(offset) {}

  std::optional<double> abscissa() const noexcept { return abscissa_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  std::optional<double> abscissa_;
  std::optional<std::size_t> offset_;
};

class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best_estimate)
      : Error(ErrorKind::accuracy, what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

class OutOfRangeError : public Error {
 public:
  explicit OutOfRangeError(const std::string& what) : Error(ErrorKind::out_of_range, what) {}
};

class MonotonicityError : public Error {
 public:
  explicit MonotonicityError(const std::string& what) : Error(ErrorKind::monotonicity, what) {}
};

class DerivativeDegenerateError : public Error {
 public:
  explicit DerivativeDegenerateError(const std::string& what)
      : Error(ErrorKind::derivative_degenerate, what) {}
};

class SingularHError : public Error {
 public:
  SingularHError(const std::string& what, double location)
      : Error(ErrorKind::singular_h, what), location_(location) {}

  double location() const noexcept { return location_; }

 private:
  double location_;
};

class NotApplicableError : public Error {
 public:
  explicit NotApplicableError(const std::string& what)
      : Error(ErrorKind::not_applicable, what) {}
};

}  // namespace fpot

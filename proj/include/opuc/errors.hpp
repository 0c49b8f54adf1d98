#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opuc {

enum class ErrorCode {
  domain,        // input outside the mathematical domain
  precision,     // working precision exhausted
  degeneracy,    // Toeplitz positive-definiteness violated
  resolution,    // quadrature grid too coarse
  range,         // integer range exceeded in a construction
  spec_malformed,
  spec_unknown_generator,
  spec_out_of_range,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::domain, what) {}
};

/// Raised when a computation cannot be trusted at the available precision.
/// `index` names the order (moment, degree or pivot) where it was detected.
class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, std::size_t index, unsigned bits)
      : Error(ErrorCode::precision, what), index_(index), bits_(bits) {}
  std::size_t index() const { return index_; }
  unsigned bits() const { return bits_; }

 private:
  std::size_t index_;
  unsigned bits_;
};

/// The moment Toeplitz matrix stopped being positive definite at `order`.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, std::size_t order)
      : Error(ErrorCode::degeneracy, what), order_(order) {}
  std::size_t order() const { return order_; }

 private:
  std::size_t order_;
};

class ResolutionError : public Error {
 public:
  explicit ResolutionError(const std::string& what) : Error(ErrorCode::resolution, what) {}
};

/// Integer overflow in an exponent-set construction. `max_feasible_j` is the
/// largest block index that could still be represented.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, long max_feasible_j)
      : Error(ErrorCode::range, what), max_feasible_j_(max_feasible_j) {}
  long max_feasible_j() const { return max_feasible_j_; }

 private:
  long max_feasible_j_;
};

/// Diagnostic for a rejected measure-spec document; `field` is a JSON path.
class SpecError : public Error {
 public:
  SpecError(ErrorCode code, std::string field, const std::string& what)
      : Error(code, field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace opuc

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ncframe {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operand shapes or algebra specs do not conform.
struct ShapeError : Error {
  using Error::Error;
};

/// Index or index set outside {0, ..., k-1}.
struct IndexError : Error {
  using Error::Error;
};

/// complete_to_unitary was handed a matrix whose rows are not orthonormal.
struct NotCoisometricError : Error {
  explicit NotCoisometricError(double defect)
      : Error("matrix is not a coisometry (||MM* - I|| = " + std::to_string(defect) + ")"),
        defect(defect) {}
  double defect;
};

struct NotTightError : Error {
  explicit NotTightError(double residual)
      : Error("frame is not tight (residual " + std::to_string(residual) + ")"),
        residual(residual) {}
  double residual;
};

struct FactorizationError : Error {
  explicit FactorizationError(double residual)
      : Error("cannot factorize a non-tight frame (residual " + std::to_string(residual) + ")"),
        residual(residual) {}
  double residual;
};

struct NotUnitaryError : Error {
  using Error::Error;
};

struct PartitionError : Error {
  using Error::Error;
};

/// A column inner product <f_i, f_i> is not invertible.
struct DegenerateColumnError : Error {
  explicit DegenerateColumnError(std::size_t column)
      : Error("column " + std::to_string(column + 1) + " has a singular self inner product"),
        column(column) {}
  std::size_t column;
};

struct ConstantMismatchError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace ncframe

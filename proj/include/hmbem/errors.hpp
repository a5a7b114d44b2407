#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmbem {

/// Input lies outside the domain of an operation (point off the Morton box,
/// kernel evaluated at coincident points, potential evaluated on the surface).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested problem exceeds a configured size limit.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wraps a failure raised while filling or compressing one matrix block.
class BlockError : public std::runtime_error {
 public:
  BlockError(const std::string& what, std::size_t row_lo, std::size_t row_hi,
             std::size_t col_lo, std::size_t col_hi)
      : std::runtime_error(what), row_lo(row_lo), row_hi(row_hi), col_lo(col_lo),
        col_hi(col_hi) {}

  std::size_t row_lo, row_hi, col_lo, col_hi;
};

class WorkerError : public std::runtime_error {
 public:
  WorkerError(const std::string& what, std::size_t worker)
      : std::runtime_error(what), worker(worker) {}

  std::size_t worker;
};

/// CG encountered p^T A p <= 0, i.e. the operator is not positive definite.
class BreakdownError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hmbem

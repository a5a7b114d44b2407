#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "hmbem/geometry.hpp"

namespace hmbem {

/// Application-side view of a matrix A indexed by two node sets. Indices are
/// in application order; the H-matrix engine translates through its own
/// permutations. Implementations are called concurrently from several
/// threads and must return bit-identical values for repeated (i, j).
class EntryEvaluator {
 public:
  virtual ~EntryEvaluator() = default;

  virtual double get_matrix_entry(std::size_t i, std::size_t j) const = 0;
  virtual std::size_t row_count() const = 0;
  virtual std::size_t col_count() const = 0;
  virtual Point3 row_point(std::size_t i) const = 0;
  virtual Point3 col_point(std::size_t j) const = 0;
};

/// M(a, b) = get_matrix_entry(rows[a], cols[b]). Evaluator failures are
/// rethrown as BlockError carrying the first/last requested indices.
Eigen::MatrixXd evaluate_block(const EntryEvaluator& ev, std::span<const std::size_t> rows,
                               std::span<const std::size_t> cols);

/// Writes the block into caller-provided column-major storage of size rows*cols.
void evaluate_block_into(const EntryEvaluator& ev, std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols, std::span<double> out);

}  // namespace hmbem

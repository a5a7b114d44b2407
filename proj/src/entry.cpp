#include "hmbem/entry.hpp"

#include <exception>
#include <string>

#include "hmbem/errors.hpp"

namespace hmbem {

namespace {

void check_indices(const EntryEvaluator& ev, std::span<const std::size_t> rows,
                   std::span<const std::size_t> cols) {
  for (auto i : rows)
    if (i >= ev.row_count()) throw DimensionError("row index " + std::to_string(i) + " out of range");
  for (auto j : cols)
    if (j >= ev.col_count()) throw DimensionError("column index " + std::to_string(j) + " out of range");
}

}  // namespace

void evaluate_block_into(const EntryEvaluator& ev, std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols, std::span<double> out) {
  check_indices(ev, rows, cols);
  if (out.size() != rows.size() * cols.size()) throw DimensionError("block storage size mismatch");
  const std::size_t m = rows.size();
  for (std::size_t b = 0; b < cols.size(); ++b) {
    for (std::size_t a = 0; a < m; ++a) {
      try {
        out[a + b * m] = ev.get_matrix_entry(rows[a], cols[b]);
      } catch (const BlockError&) {
        throw;
      } catch (const std::exception& e) {
        throw BlockError(std::string("entry (") + std::to_string(rows[a]) + ", " +
                             std::to_string(cols[b]) + "): " + e.what(),
                         rows.front(), rows.back() + 1, cols.front(), cols.back() + 1);
      }
    }
  }
}

Eigen::MatrixXd evaluate_block(const EntryEvaluator& ev, std::span<const std::size_t> rows,
                               std::span<const std::size_t> cols) {
  Eigen::MatrixXd block(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  evaluate_block_into(ev, rows, cols, std::span<double>(block.data(), static_cast<std::size_t>(block.size())));
  return block;
}

}  // namespace hmbem

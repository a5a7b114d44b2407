#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hmbem/blocktree.hpp"
#include "hmbem/clustering.hpp"
#include "hmbem/entry.hpp"
#include "hmbem/lowrank.hpp"

namespace hmbem {

struct StorageStats {
  std::size_t dense_blocks = 0;
  std::size_t dense_entries = 0;
  std::size_t lowrank_blocks = 0;
  std::size_t lowrank_entries = 0;  // sum of k_eff * (|tau| + |sigma|)
  std::size_t dense_equivalent = 0; // n_rows * n_cols

  std::size_t total_entries() const { return dense_entries + lowrank_entries; }
  double compression_ratio() const {
    return dense_equivalent ? static_cast<double>(total_entries()) / static_cast<double>(dense_equivalent) : 0.0;
  }
};

/// Wall-clock time spent on each kind of block during assembly.
struct AssemblyTimings {
  double dense_seconds = 0.0;
  double aca_seconds = 0.0;
};

/// H-matrix with every leaf block precomputed. Blocks are kept in sorted
/// (cluster) index order: dense blocks column-major back to back in one
/// array, admissible blocks as outer-product factors. The matrix may hold a
/// subset of a block tree's leaves, in which case `dense_ids`/`lowrank_ids`
/// give the positions in the full task lists.
struct HMatrix {
  std::size_t n_rows = 0, n_cols = 0;
  std::vector<std::size_t> row_perm, col_perm;  // sorted position -> application index

  std::vector<BlockTask> dense_tasks;
  std::vector<std::size_t> dense_ids;
  std::vector<std::size_t> dense_offsets;  // dense_tasks.size() + 1 entries
  std::vector<double> dense_values;

  std::vector<BlockTask> lowrank_tasks;
  std::vector<std::size_t> lowrank_ids;
  std::vector<RkMatrix> lowrank;

  StorageStats stats() const;
  /// Reconstructed full matrix in application order.
  Eigen::MatrixXd to_dense() const;
};

/// Precompute every leaf of `tasks`. Dense leaves are evaluated entry by entry,
/// admissible leaves compressed with ACA; tasks are spread over `threads`
/// threads and the result does not depend on the schedule.
HMatrix assemble(const EntryEvaluator& ev, const ClusterTree& rows, const ClusterTree& cols,
                 const TaskLists& tasks, const AcaConfig& aca_cfg, std::size_t threads = 1);

/// Same as assemble() but restricted to the listed task positions (each list
/// must be ascending). Runs on the calling thread.
HMatrix assemble_subset(const EntryEvaluator& ev, const ClusterTree& rows, const ClusterTree& cols,
                        const TaskLists& tasks, std::span<const std::size_t> dense_ids,
                        std::span<const std::size_t> lowrank_ids, const AcaConfig& aca_cfg,
                        AssemblyTimings* timings = nullptr);

/// y = H x in application order. Blocks are applied in task order (dense
/// first, then admissible), so repeated calls are bitwise reproducible.
Eigen::VectorXd matvec(const HMatrix& H, const Eigen::Ref<const Eigen::VectorXd>& x);

inline constexpr std::size_t kDefaultOracleLimit = 8192;

/// Full matrix in application order. Throws ResourceError above `limit` rows or columns.
Eigen::MatrixXd assemble_dense_oracle(const EntryEvaluator& ev, std::size_t threads = 1,
                                      std::size_t limit = kDefaultOracleLimit);

/// JSON lines: one object per block kind plus a total with the compression ratio.
void write_storage_stats(std::ostream& out, const StorageStats& stats);

}  // namespace hmbem

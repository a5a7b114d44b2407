#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hmbem/clustering.hpp"

namespace hmbem {

struct BlockTreeConfig {
  double eta = 1.0;
  std::size_t leaf_size = 32;
};

/// min(diam Q_tau, diam Q_sigma) <= eta * dist(Q_tau, Q_sigma)
bool is_admissible(const Cluster& tau, const Cluster& sigma, double eta);

enum class BlockKind : std::uint8_t { Inner, Admissible, Dense };

/// Leaf block tau x sigma in sorted (internal) index ranges.
struct BlockTask {
  std::size_t row_lo = 0, row_hi = 0;
  std::size_t col_lo = 0, col_hi = 0;
  std::size_t row_cluster = 0, col_cluster = 0;

  std::size_t rows() const { return row_hi - row_lo; }
  std::size_t cols() const { return col_hi - col_lo; }
  friend bool operator==(const BlockTask&, const BlockTask&) = default;
};

struct TaskLists {
  std::vector<BlockTask> admissible;
  std::vector<BlockTask> dense;

  /// FNV-1a digest of both lists; identical inputs give identical digests.
  std::uint64_t digest() const;
};

struct BlockCluster {
  std::size_t row_cluster = 0, col_cluster = 0;
  BlockKind kind = BlockKind::Dense;
  std::vector<std::size_t> children;  // 0 or 4 entries, row child major
};

struct BlockClusterTree {
  std::vector<BlockCluster> nodes;  // nodes[0] is the root
  TaskLists tasks;
};

/// Recursive construction starting from root(rows) x root(cols): a block is
/// subdivided iff it is not admissible and both sides exceed the leaf size.
/// Leaves are appended to the task lists in depth-first order.
BlockClusterTree build_block_cluster_tree(const ClusterTree& rows, const ClusterTree& cols,
                                          const BlockTreeConfig& cfg);

/// One line per leaf: "kind row_lo row_hi col_lo col_hi".
void dump_leaves(std::ostream& out, const TaskLists& tasks);

}  // namespace hmbem

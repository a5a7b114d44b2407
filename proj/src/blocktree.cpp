#include "hmbem/blocktree.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace hmbem {

bool is_admissible(const Cluster& tau, const Cluster& sigma, double eta) {
  return std::min(bbox_diam(tau.bbox), bbox_diam(sigma.bbox)) <= eta * bbox_dist(tau.bbox, sigma.bbox);
}

std::uint64_t TaskLists::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto* list : {&admissible, &dense}) {
    mix(list->size());
    for (const auto& t : *list) {
      mix(t.row_lo), mix(t.row_hi), mix(t.col_lo), mix(t.col_hi);
    }
  }
  return h;
}

namespace {

class Builder {
 public:
  Builder(const ClusterTree& rows, const ClusterTree& cols, const BlockTreeConfig& cfg)
      : rows_(rows), cols_(cols), cfg_(cfg) {}

  std::size_t build(std::size_t tau_id, std::size_t sigma_id) {
    const Cluster& tau = rows_[tau_id];
    const Cluster& sigma = cols_[sigma_id];
    const std::size_t id = out_.nodes.size();
    out_.nodes.push_back(BlockCluster{tau_id, sigma_id, BlockKind::Inner, {}});

    const bool admissible = is_admissible(tau, sigma, cfg_.eta);
    if (!admissible && tau.size() > cfg_.leaf_size && sigma.size() > cfg_.leaf_size) {
      // Both clusters are larger than the leaf size, so both have two children.
      std::vector<std::size_t> children;
      for (std::size_t tc : tau.children) {
        for (std::size_t sc : sigma.children) children.push_back(build(tc, sc));
      }
      out_.nodes[id].children = std::move(children);
      return id;
    }

    BlockTask task{tau.lo, tau.hi, sigma.lo, sigma.hi, tau_id, sigma_id};
    if (admissible) {
      out_.nodes[id].kind = BlockKind::Admissible;
      out_.tasks.admissible.push_back(task);
    } else {
      out_.nodes[id].kind = BlockKind::Dense;
      out_.tasks.dense.push_back(task);
    }
    return id;
  }

  BlockClusterTree take() { return std::move(out_); }

 private:
  const ClusterTree& rows_;
  const ClusterTree& cols_;
  const BlockTreeConfig& cfg_;
  BlockClusterTree out_;
};

}  // namespace

BlockClusterTree build_block_cluster_tree(const ClusterTree& rows, const ClusterTree& cols,
                                          const BlockTreeConfig& cfg) {
  if (!(cfg.eta >= 0.0)) throw std::invalid_argument("eta must be nonnegative");
  if (rows.leaf_size() != cfg.leaf_size || cols.leaf_size() != cfg.leaf_size) {
    throw std::invalid_argument("cluster trees were built with a different leaf size");
  }
  Builder builder(rows, cols, cfg);
  builder.build(0, 0);
  return builder.take();
}

void dump_leaves(std::ostream& out, const TaskLists& tasks) {
  for (const auto& t : tasks.admissible) {
    out << "admissible " << t.row_lo << ' ' << t.row_hi << ' ' << t.col_lo << ' ' << t.col_hi << '\n';
  }
  for (const auto& t : tasks.dense) {
    out << "dense " << t.row_lo << ' ' << t.row_hi << ' ' << t.col_lo << ' ' << t.col_hi << '\n';
  }
}

}  // namespace hmbem

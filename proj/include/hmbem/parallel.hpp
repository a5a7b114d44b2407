#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hmbem/blocktree.hpp"
#include "hmbem/hmatrix.hpp"

namespace hmbem {

/// Greedy longest-processing-time assignment: tasks by descending cost (ties
/// by index) each go to the least-loaded worker (ties by lowest id).
struct LptResult {
  std::vector<std::size_t> assign;  // task -> worker
  std::vector<std::size_t> load;    // worker -> summed cost
};
LptResult lpt_assign(std::span<const std::size_t> costs, std::size_t workers);

/// Assignment of both task lists to p workers, balanced by stored size:
/// |tau||sigma| per dense block, k_max (|tau| + |sigma|) per admissible block.
struct WorkerPartition {
  std::size_t p = 1;
  std::vector<std::size_t> dense_assign;
  std::vector<std::size_t> lowrank_assign;
  std::vector<std::size_t> dense_load;
  std::vector<std::size_t> lowrank_load;

  /// Ascending task positions owned by `worker`.
  std::vector<std::size_t> dense_tasks_of(std::size_t worker) const;
  std::vector<std::size_t> lowrank_tasks_of(std::size_t worker) const;
};

std::size_t dense_cost(const BlockTask& t);
std::size_t lowrank_cost(const BlockTask& t, std::size_t k_max);

WorkerPartition partition_tasks(const TaskLists& tasks, std::size_t k_max, std::size_t p);

/// The blocks one worker owns. A shard never reads another shard's storage.
struct Shard {
  std::size_t worker = 0;
  HMatrix matrix;
  AssemblyTimings timings;
};

/// Every worker assembles its own sub-lists on its own thread. A failure is
/// rethrown as WorkerError naming the worker.
std::vector<Shard> distributed_assemble(const EntryEvaluator& ev, const ClusterTree& rows,
                                        const ClusterTree& cols, const TaskLists& tasks,
                                        const AcaConfig& aca_cfg, const WorkerPartition& part);

/// Each worker multiplies the replicated x with its own blocks; the partial
/// results are then summed in ascending worker order.
Eigen::VectorXd distributed_matvec(std::span<const Shard> shards, const Eigen::Ref<const Eigen::VectorXd>& x);

struct WorkerLoad {
  std::size_t worker = 0;
  std::size_t dense_entries = 0;
  std::size_t lowrank_entries = 0;  // k_eff (|tau| + |sigma|), as stored
  double dense_seconds = 0.0;
  double aca_seconds = 0.0;
};

std::vector<WorkerLoad> load_report(const WorkerPartition& part, std::span<const Shard> shards);

/// CSV "worker_id,kind,entries,seconds" with kinds "dense" and "aca".
void write_load_csv(std::ostream& out, std::span<const WorkerLoad> loads);

}  // namespace hmbem

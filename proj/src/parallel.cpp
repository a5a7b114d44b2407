#include "hmbem/parallel.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <thread>

#include "hmbem/errors.hpp"

namespace hmbem {

LptResult lpt_assign(std::span<const std::size_t> costs, std::size_t workers) {
  if (workers == 0) throw std::invalid_argument("worker count must be positive");
  std::vector<std::size_t> order(costs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return costs[a] > costs[b]; });

  using Slot = std::pair<std::size_t, std::size_t>;  // (load, worker)
  std::priority_queue<Slot, std::vector<Slot>, std::greater<>> heap;
  for (std::size_t w = 0; w < workers; ++w) heap.emplace(0, w);

  LptResult out{std::vector<std::size_t>(costs.size()), std::vector<std::size_t>(workers, 0)};
  for (std::size_t task : order) {
    auto [load, w] = heap.top();
    heap.pop();
    out.assign[task] = w;
    out.load[w] = load + costs[task];
    heap.emplace(out.load[w], w);
  }
  return out;
}

namespace {

std::vector<std::size_t> owned_by(const std::vector<std::size_t>& assign, std::size_t worker) {
  std::vector<std::size_t> ids;
  for (std::size_t t = 0; t < assign.size(); ++t) {
    if (assign[t] == worker) ids.push_back(t);
  }
  return ids;
}

}  // namespace

std::vector<std::size_t> WorkerPartition::dense_tasks_of(std::size_t worker) const {
  return owned_by(dense_assign, worker);
}

std::vector<std::size_t> WorkerPartition::lowrank_tasks_of(std::size_t worker) const {
  return owned_by(lowrank_assign, worker);
}

std::size_t dense_cost(const BlockTask& t) { return t.rows() * t.cols(); }
std::size_t lowrank_cost(const BlockTask& t, std::size_t k_max) { return k_max * (t.rows() + t.cols()); }

WorkerPartition partition_tasks(const TaskLists& tasks, std::size_t k_max, std::size_t p) {
  if (p == 0) throw std::invalid_argument("worker count must be positive");
  std::vector<std::size_t> dcost, acost;
  dcost.reserve(tasks.dense.size());
  acost.reserve(tasks.admissible.size());
  for (const auto& t : tasks.dense) dcost.push_back(dense_cost(t));
  for (const auto& t : tasks.admissible) acost.push_back(lowrank_cost(t, k_max));

  LptResult d = lpt_assign(dcost, p), a = lpt_assign(acost, p);
  return WorkerPartition{p, std::move(d.assign), std::move(a.assign), std::move(d.load), std::move(a.load)};
}

std::vector<Shard> distributed_assemble(const EntryEvaluator& ev, const ClusterTree& rows,
                                        const ClusterTree& cols, const TaskLists& tasks,
                                        const AcaConfig& aca_cfg, const WorkerPartition& part) {
  if (part.dense_assign.size() != tasks.dense.size() || part.lowrank_assign.size() != tasks.admissible.size()) {
    throw std::invalid_argument("partition does not match the task lists");
  }
  std::vector<Shard> shards(part.p);
  std::vector<std::exception_ptr> errors(part.p);
  {
    std::vector<std::jthread> workers;
    workers.reserve(part.p);
    for (std::size_t w = 0; w < part.p; ++w) {
      workers.emplace_back([&, w] {
        try {
          shards[w].worker = w;
          shards[w].matrix = assemble_subset(ev, rows, cols, tasks, part.dense_tasks_of(w),
                                             part.lowrank_tasks_of(w), aca_cfg, &shards[w].timings);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (std::size_t w = 0; w < part.p; ++w) {
    if (!errors[w]) continue;
    try {
      std::rethrow_exception(errors[w]);
    } catch (const std::exception& e) {
      throw WorkerError("worker " + std::to_string(w) + ": " + e.what(), w);
    }
  }
  return shards;
}

Eigen::VectorXd distributed_matvec(std::span<const Shard> shards, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (shards.empty()) throw std::invalid_argument("no shards");
  for (const auto& s : shards) {
    if (static_cast<std::size_t>(x.size()) != s.matrix.n_cols) throw DimensionError("distributed_matvec: vector length does not match the column count");
  }
  std::vector<Eigen::VectorXd> partial(shards.size());
  std::vector<std::exception_ptr> errors(shards.size());
  {
    std::vector<std::jthread> workers;
    workers.reserve(shards.size());
    for (std::size_t w = 0; w < shards.size(); ++w) {
      workers.emplace_back([&, w] {
        try {
          partial[w] = matvec(shards[w].matrix, x);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Eigen::VectorXd y = std::move(partial[0]);
  for (std::size_t w = 1; w < partial.size(); ++w) y += partial[w];
  return y;
}

std::vector<WorkerLoad> load_report(const WorkerPartition& part, std::span<const Shard> shards) {
  if (shards.size() != part.p) throw std::invalid_argument("shard count does not match the partition");
  std::vector<WorkerLoad> out;
  out.reserve(shards.size());
  for (const auto& s : shards) {
    const StorageStats st = s.matrix.stats();
    out.push_back({s.worker, st.dense_entries, st.lowrank_entries, s.timings.dense_seconds, s.timings.aca_seconds});
  }
  return out;
}

void write_load_csv(std::ostream& out, std::span<const WorkerLoad> loads) {
  out << "worker_id,kind,entries,seconds\n";
  for (const auto& l : loads) {
    out << l.worker << ",dense," << l.dense_entries << ',' << l.dense_seconds << '\n';
    out << l.worker << ",aca," << l.lowrank_entries << ',' << l.aca_seconds << '\n';
  }
}

}  // namespace hmbem

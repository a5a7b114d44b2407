#include "hmbem/hmatrix.hpp"

#include <chrono>
#include <exception>
#include <numeric>
#include <ostream>
#include <string>

#include <json.hpp>

#include "hmbem/detail/parallel_for.hpp"
#include "hmbem/errors.hpp"

namespace hmbem {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::size_t> index_range(const std::vector<std::size_t>& perm, std::size_t lo, std::size_t hi) {
  return {perm.begin() + static_cast<std::ptrdiff_t>(lo), perm.begin() + static_cast<std::ptrdiff_t>(hi)};
}

[[noreturn]] void rethrow_for_block(const BlockTask& t, const std::exception& e) {
  throw BlockError("block [" + std::to_string(t.row_lo) + ", " + std::to_string(t.row_hi) + ") x [" +
                       std::to_string(t.col_lo) + ", " + std::to_string(t.col_hi) + "): " + e.what(),
                   t.row_lo, t.row_hi, t.col_lo, t.col_hi);
}

HMatrix skeleton(const EntryEvaluator& ev, const ClusterTree& rows, const ClusterTree& cols,
                 const TaskLists& tasks, std::span<const std::size_t> dense_ids,
                 std::span<const std::size_t> lowrank_ids) {
  if (ev.row_count() != rows.size() || ev.col_count() != cols.size()) {
    throw DimensionError("evaluator size does not match the cluster trees");
  }
  HMatrix H;
  H.n_rows = rows.size();
  H.n_cols = cols.size();
  H.row_perm = rows.perm();
  H.col_perm = cols.perm();

  H.dense_ids.assign(dense_ids.begin(), dense_ids.end());
  H.dense_offsets.reserve(dense_ids.size() + 1);
  H.dense_offsets.push_back(0);
  for (std::size_t id : dense_ids) {
    const BlockTask& t = tasks.dense.at(id);
    H.dense_tasks.push_back(t);
    H.dense_offsets.push_back(H.dense_offsets.back() + t.rows() * t.cols());
  }
  H.dense_values.resize(H.dense_offsets.back());

  H.lowrank_ids.assign(lowrank_ids.begin(), lowrank_ids.end());
  for (std::size_t id : lowrank_ids) H.lowrank_tasks.push_back(tasks.admissible.at(id));
  H.lowrank.resize(lowrank_ids.size());
  return H;
}

void fill_dense(const EntryEvaluator& ev, HMatrix& H, std::size_t b) {
  const BlockTask& t = H.dense_tasks[b];
  try {
    const auto r = index_range(H.row_perm, t.row_lo, t.row_hi);
    const auto c = index_range(H.col_perm, t.col_lo, t.col_hi);
    evaluate_block_into(ev, r, c,
                        std::span(H.dense_values).subspan(H.dense_offsets[b], t.rows() * t.cols()));
  } catch (const std::exception& e) {
    rethrow_for_block(t, e);
  }
}

void fill_lowrank(const EntryEvaluator& ev, HMatrix& H, std::size_t b, const AcaConfig& cfg) {
  const BlockTask& t = H.lowrank_tasks[b];
  try {
    H.lowrank[b] = aca(ev, index_range(H.row_perm, t.row_lo, t.row_hi),
                       index_range(H.col_perm, t.col_lo, t.col_hi), cfg);
  } catch (const std::exception& e) {
    rethrow_for_block(t, e);
  }
}

}  // namespace

StorageStats HMatrix::stats() const {
  StorageStats s;
  s.dense_blocks = dense_tasks.size();
  s.dense_entries = dense_values.size();
  s.lowrank_blocks = lowrank_tasks.size();
  for (std::size_t b = 0; b < lowrank.size(); ++b) {
    s.lowrank_entries += static_cast<std::size_t>(lowrank[b].rank()) * (lowrank_tasks[b].rows() + lowrank_tasks[b].cols());
  }
  s.dense_equivalent = n_rows * n_cols;
  return s;
}

Eigen::MatrixXd HMatrix::to_dense() const {
  Eigen::MatrixXd internal = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
  for (std::size_t b = 0; b < dense_tasks.size(); ++b) {
    const BlockTask& t = dense_tasks[b];
    internal.block(t.row_lo, t.col_lo, t.rows(), t.cols()) = Eigen::Map<const Eigen::MatrixXd>(
        dense_values.data() + dense_offsets[b], static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols()));
  }
  for (std::size_t b = 0; b < lowrank_tasks.size(); ++b) {
    const BlockTask& t = lowrank_tasks[b];
    if (lowrank[b].rank() > 0) internal.block(t.row_lo, t.col_lo, t.rows(), t.cols()) = lowrank[b].dense();
  }
  Eigen::MatrixXd out(internal.rows(), internal.cols());
  for (std::size_t j = 0; j < n_cols; ++j) {
    for (std::size_t i = 0; i < n_rows; ++i) out(row_perm[i], col_perm[j]) = internal(i, j);
  }
  return out;
}

HMatrix assemble(const EntryEvaluator& ev, const ClusterTree& rows, const ClusterTree& cols,
                 const TaskLists& tasks, const AcaConfig& aca_cfg, std::size_t threads) {
  std::vector<std::size_t> dense_ids(tasks.dense.size()), lowrank_ids(tasks.admissible.size());
  std::iota(dense_ids.begin(), dense_ids.end(), std::size_t{0});
  std::iota(lowrank_ids.begin(), lowrank_ids.end(), std::size_t{0});
  HMatrix H = skeleton(ev, rows, cols, tasks, dense_ids, lowrank_ids);

  // Each task writes only its own pre-sized slot.
  const std::size_t n_dense = H.dense_tasks.size();
  detail::parallel_for(n_dense + H.lowrank_tasks.size(), threads, [&](std::size_t k) {
    if (k < n_dense) {
      fill_dense(ev, H, k);
    } else {
      fill_lowrank(ev, H, k - n_dense, aca_cfg);
    }
  });
  return H;
}

HMatrix assemble_subset(const EntryEvaluator& ev, const ClusterTree& rows, const ClusterTree& cols,
                        const TaskLists& tasks, std::span<const std::size_t> dense_ids,
                        std::span<const std::size_t> lowrank_ids, const AcaConfig& aca_cfg,
                        AssemblyTimings* timings) {
  HMatrix H = skeleton(ev, rows, cols, tasks, dense_ids, lowrank_ids);
  const auto t0 = Clock::now();
  for (std::size_t b = 0; b < H.dense_tasks.size(); ++b) fill_dense(ev, H, b);
  const auto t1 = Clock::now();
  for (std::size_t b = 0; b < H.lowrank_tasks.size(); ++b) fill_lowrank(ev, H, b, aca_cfg);
  const auto t2 = Clock::now();
  if (timings) {
    timings->dense_seconds = std::chrono::duration<double>(t1 - t0).count();
    timings->aca_seconds = std::chrono::duration<double>(t2 - t1).count();
  }
  return H;
}

Eigen::VectorXd matvec(const HMatrix& H, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (static_cast<std::size_t>(x.size()) != H.n_cols) throw DimensionError("matvec: vector length does not match the column count");
  Eigen::VectorXd xs(x.size()), ys = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(H.n_rows));
  for (std::size_t s = 0; s < H.n_cols; ++s) xs(static_cast<Eigen::Index>(s)) = x(static_cast<Eigen::Index>(H.col_perm[s]));

  for (std::size_t b = 0; b < H.dense_tasks.size(); ++b) {
    const BlockTask& t = H.dense_tasks[b];
    Eigen::Map<const Eigen::MatrixXd> block(H.dense_values.data() + H.dense_offsets[b],
                                            static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols()));
    ys.segment(t.row_lo, t.rows()).noalias() += block * xs.segment(t.col_lo, t.cols());
  }
  for (std::size_t b = 0; b < H.lowrank_tasks.size(); ++b) {
    const BlockTask& t = H.lowrank_tasks[b];
    rk_matvec_add(H.lowrank[b], std::span<const double>(xs.data() + t.col_lo, t.cols()),
                  std::span<double>(ys.data() + t.row_lo, t.rows()));
  }

  Eigen::VectorXd y(ys.size());
  for (std::size_t s = 0; s < H.n_rows; ++s) y(static_cast<Eigen::Index>(H.row_perm[s])) = ys(static_cast<Eigen::Index>(s));
  return y;
}

Eigen::MatrixXd assemble_dense_oracle(const EntryEvaluator& ev, std::size_t threads, std::size_t limit) {
  const std::size_t m = ev.row_count(), n = ev.col_count();
  if (m > limit || n > limit) {
    throw ResourceError("dense oracle of size " + std::to_string(m) + " x " + std::to_string(n) +
                        " exceeds the limit of " + std::to_string(limit));
  }
  Eigen::MatrixXd A(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  detail::parallel_for(n, threads, [&](std::size_t j) {
    for (std::size_t i = 0; i < m; ++i) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ev.get_matrix_entry(i, j);
  });
  return A;
}

void write_storage_stats(std::ostream& out, const StorageStats& s) {
  using nlohmann::json;
  out << json{{"kind", "dense"}, {"blocks", s.dense_blocks}, {"entries", s.dense_entries}}.dump() << '\n';
  out << json{{"kind", "lowrank"}, {"blocks", s.lowrank_blocks}, {"entries", s.lowrank_entries}}.dump() << '\n';
  out << json{{"kind", "total"},
              {"entries", s.total_entries()},
              {"dense_equivalent", s.dense_equivalent},
              {"compression_ratio", s.compression_ratio()}}
             .dump()
      << '\n';
}

}  // namespace hmbem

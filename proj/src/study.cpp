#include "hmbem/study.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hmbem/clustering.hpp"
#include "hmbem/errors.hpp"
#include "hmbem/geometry.hpp"
#include "hmbem/solver.hpp"

namespace hmbem {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::ostringstream s;
  for (std::size_t i = 0; i < values.size(); ++i) s << (i ? " " : "") << values[i];
  return s.str();
}

}  // namespace

void write_metadata(std::ostream& out, const RunConfig& cfg, const std::string& command) {
  out << "# command=" << command << '\n'
      << "# geometry=" << cfg.geometry << '\n'
      << "# level=" << cfg.level << '\n'
      << "# levels=" << join(cfg.levels) << '\n'
      << "# eta=" << cfg.eta << '\n'
      << "# c_leaf=" << cfg.leaf_size << '\n'
      << "# k_max=" << cfg.k_max << '\n'
      << "# k_list=" << join(cfg.k_list) << '\n'
      << "# aca_rel_tol=" << cfg.aca_rel_tol << '\n'
      << "# cg_tol=" << cfg.cg_tol << '\n'
      << "# workers=" << cfg.workers << '\n'
      << "# p_list=" << join(cfg.p_list) << '\n'
      << "# far_order=" << cfg.quad.far_order << '\n'
      << "# sing_order=" << cfg.quad.sing_order << '\n'
      << "# near_threshold=" << cfg.quad.near_threshold << '\n'
      << "# grid_n=" << cfg.grid_n << '\n'
      << "# eval_points=lattice [0.25,0.75]^3 with grid_n^3 points\n"
      << "# output=" << cfg.output << '\n'
      << "# seed=" << cfg.seed << '\n'
      << "# repeats=" << cfg.repeats << '\n';
}

SolveOutcome solve_cube(const RunConfig& cfg, unsigned level, std::size_t k_max, std::size_t p) {
  if (cfg.geometry != "cube") throw std::invalid_argument("unsupported geometry: " + cfg.geometry);
  auto mesh = std::make_shared<const SurfaceMesh>(make_cube_mesh(level));
  const bem::LaplaceSlpEvaluator ev(mesh, cfg.quad);
  const AcaConfig aca_cfg{k_max, cfg.aca_rel_tol};

  SolveOutcome out;
  out.n = mesh->size();
  out.k = k_max;
  out.p = p;

  const unsigned repeats = std::max(1u, cfg.repeats);
  std::vector<Shard> shards;
  WorkerPartition part;
  double setup_total = 0.0;
  for (unsigned r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    const ClusterTree tree(mesh->centers, cfg.leaf_size);
    const BlockClusterTree blocks = build_block_cluster_tree(tree, tree, {cfg.eta, cfg.leaf_size});
    part = partition_tasks(blocks.tasks, k_max, p);
    const double structure = seconds_since(t0);
    shards = distributed_assemble(ev, tree, tree, blocks.tasks, aca_cfg, part);
    double slowest = 0.0;
    for (const auto& s : shards) slowest = std::max(slowest, s.timings.dense_seconds + s.timings.aca_seconds);
    setup_total += structure + slowest;
  }
  out.setup_seconds = setup_total / repeats;
  out.loads = load_report(part, shards);
  for (const auto& s : shards) {
    const StorageStats st = s.matrix.stats();
    out.storage.dense_blocks += st.dense_blocks;
    out.storage.dense_entries += st.dense_entries;
    out.storage.lowrank_blocks += st.lowrank_blocks;
    out.storage.lowrank_entries += st.lowrank_entries;
  }
  out.storage.dense_equivalent = out.n * out.n;

  const Eigen::VectorXd rhs = bem::assemble_rhs(*mesh, bem::harmonic_data, cfg.quad.far_order);
  CgConfig cg_cfg;
  cg_cfg.rel_residual_tol = cfg.cg_tol;
  const CgResult cg = cg_solve([&](const Eigen::VectorXd& x) { return distributed_matvec(shards, x); }, rhs, cg_cfg);
  out.iters = cg.iters;
  out.rel_residual = cg.final_rel_residual;
  out.converged = cg.converged;
  out.cg_seconds_per_iter = cg.per_iter_seconds;
  out.alpha = cg.alpha;

  const auto points = make_eval_points(cfg.grid_n);
  out.error = bem::worst_case_error(*mesh, std::span<const double>(cg.alpha.data(), out.n), points,
                                    bem::harmonic_data, cfg.quad.far_order);
  return out;
}

double fitted_rate(std::span<const double> n, std::span<const double> error) {
  if (n.size() != error.size() || n.size() < 2) throw std::invalid_argument("rate fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double x = std::log(n[i]), y = std::log(error[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double m = static_cast<double>(n.size());
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<ConvergenceRow> cmd_convergence_h(const RunConfig& cfg, std::ostream& csv) {
  csv << std::setprecision(std::numeric_limits<double>::max_digits10);
  write_metadata(csv, cfg, "convergence-h");
  csv << "N,error\n";
  std::vector<ConvergenceRow> rows;
  for (unsigned level : cfg.levels) {
    ConvergenceRow row;
    row.x = 6.0 * std::pow(4.0, level);
    try {
      row.error = solve_cube(cfg, level, cfg.k_max, cfg.workers).error;
    } catch (const std::exception& e) {
      row.error = std::numeric_limits<double>::quiet_NaN();
      row.failure = e.what();
      csv << "# level " << level << " failed: " << e.what() << '\n';
    }
    csv << static_cast<std::size_t>(row.x) << ',' << row.error << '\n' << std::flush;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ConvergenceRow> cmd_convergence_aca(const RunConfig& cfg, std::ostream& csv) {
  csv << std::setprecision(std::numeric_limits<double>::max_digits10);
  write_metadata(csv, cfg, "convergence-aca");
  csv << "k,error\n";
  std::vector<ConvergenceRow> rows;
  for (std::size_t k : cfg.k_list) {
    ConvergenceRow row;
    row.x = static_cast<double>(k);
    try {
      row.error = solve_cube(cfg, cfg.level, k, cfg.workers).error;
    } catch (const std::exception& e) {
      row.error = std::numeric_limits<double>::quiet_NaN();
      row.failure = e.what();
      csv << "# k " << k << " failed: " << e.what() << '\n';
    }
    csv << k << ',' << row.error << '\n' << std::flush;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BenchmarkRow> cmd_benchmark(const RunConfig& cfg, std::ostream& csv, const std::string& load_prefix) {
  csv << std::setprecision(std::numeric_limits<double>::max_digits10);
  write_metadata(csv, cfg, "benchmark");
  csv << "N,k,p,setup_seconds,cg_seconds_per_iter,iters\n";
  std::vector<BenchmarkRow> rows;
  for (std::size_t p : cfg.p_list) {
    BenchmarkRow row;
    try {
      row.outcome = solve_cube(cfg, cfg.level, cfg.k_max, p);
    } catch (const std::exception& e) {
      csv << "# p " << p << " failed: " << e.what() << '\n';
      continue;
    }
    const SolveOutcome& o = row.outcome;
    if (!rows.empty()) {
      const Eigen::VectorXd& ref = rows.front().outcome.alpha;
      row.max_rel_diff_vs_first = (o.alpha - ref).lpNorm<Eigen::Infinity>() / ref.lpNorm<Eigen::Infinity>();
    }
    csv << o.n << ',' << o.k << ',' << o.p << ',' << o.setup_seconds << ',' << o.cg_seconds_per_iter << ','
        << o.iters << '\n' << std::flush;
    if (!load_prefix.empty()) {
      std::ofstream loads(load_prefix + "_p" + std::to_string(p) + ".csv");
      if (!loads) throw std::runtime_error("cannot open load report " + load_prefix);
      write_load_csv(loads, o.loads);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hmbem

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hmbem/bem_laplace.hpp"
#include "hmbem/hmatrix.hpp"
#include "hmbem/parallel.hpp"

namespace hmbem {

/// Parameters shared by all studies. Defaults: eta = 1, leaf size 32,
/// CG tolerance 1e-8, 125 evaluation points.
struct RunConfig {
  std::string geometry = "cube";
  unsigned level = 3;
  std::vector<unsigned> levels{2, 3, 4, 5};
  double eta = 1.0;
  std::size_t leaf_size = 32;
  std::size_t k_max = 64;
  std::vector<std::size_t> k_list{24, 32, 48, 64, 96, 128, 160, 192};
  double aca_rel_tol = 0.0;
  double cg_tol = 1e-8;
  std::size_t workers = 1;
  std::vector<std::size_t> p_list{1};
  bem::QuadratureConfig quad;
  unsigned grid_n = 5;
  std::string output;
  std::uint64_t seed = 42;
  unsigned repeats = 1;
};

/// "# key=value" lines describing every field.
void write_metadata(std::ostream& out, const RunConfig& cfg, const std::string& command);

struct SolveOutcome {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t p = 1;
  double error = 0.0;  // worst case over the evaluation points
  std::size_t iters = 0;
  double rel_residual = 0.0;
  bool converged = false;
  double setup_seconds = 0.0;  // tree construction + slowest worker's assembly
  double cg_seconds_per_iter = 0.0;
  StorageStats storage;
  std::vector<WorkerLoad> loads;
  Eigen::VectorXd alpha;
};

/// Full pipeline on the cube: mesh, clustering, block tree, distributed
/// assembly on p workers, CG on the distributed product, and the worst-case
/// error of the single-layer potential against the harmonic solution.
SolveOutcome solve_cube(const RunConfig& cfg, unsigned level, std::size_t k_max, std::size_t p);

/// Least-squares slope of log(error) over log(N), sign flipped.
double fitted_rate(std::span<const double> n, std::span<const double> error);

struct ConvergenceRow {
  double x = 0.0;  // N or k
  double error = 0.0;
  std::optional<std::string> failure;
};

/// One row "N,error" per level of cfg.levels at fixed cfg.k_max.
std::vector<ConvergenceRow> cmd_convergence_h(const RunConfig& cfg, std::ostream& csv);
/// One row "k,error" per entry of cfg.k_list at cfg.level.
std::vector<ConvergenceRow> cmd_convergence_aca(const RunConfig& cfg, std::ostream& csv);

struct BenchmarkRow {
  SolveOutcome outcome;
  double max_rel_diff_vs_first = 0.0;  // solution deviation from the first p
};

/// Row "N,k,p,setup_seconds,cg_seconds_per_iter,iters" per entry of cfg.p_list.
/// If load_prefix is non-empty, writes the per-worker load CSV of each run to
/// "<load_prefix>_p<p>.csv".
std::vector<BenchmarkRow> cmd_benchmark(const RunConfig& cfg, std::ostream& csv,
                                        const std::string& load_prefix = {});

}  // namespace hmbem

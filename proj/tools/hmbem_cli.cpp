// Command-line driver: mesh export, tree/block dumps and the three studies.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmbem/blocktree.hpp"
#include "hmbem/clustering.hpp"
#include "hmbem/geometry.hpp"
#include "hmbem/hmatrix.hpp"
#include "hmbem/study.hpp"

namespace {

using namespace hmbem;

// Writes to the named file, or to stdout for an empty path or "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--eta", cfg.eta, "Admissibility parameter")->check(CLI::NonNegativeNumber);
  cmd->add_option("--c-leaf", cfg.leaf_size, "Leaf size C_leaf")->check(CLI::PositiveNumber);
  cmd->add_option("--aca-tol", cfg.aca_rel_tol, "ACA relative early stop (0 = fixed rank)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--cg-tol", cfg.cg_tol, "CG relative residual")->check(CLI::PositiveNumber);
  cmd->add_option("--far-order", cfg.quad.far_order, "Gauss points per direction, far pairs")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--sing-order", cfg.quad.sing_order, "Gauss points per direction, near pairs")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--near-threshold", cfg.quad.near_threshold, "Near/far cutoff in panel diameters")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-n", cfg.grid_n, "Evaluation lattice points per axis")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "Recorded in the metadata header");
  cmd->add_option("--repeats", cfg.repeats, "Setup timing repeats")->check(CLI::PositiveNumber);
  cmd->add_option("-o,--output", cfg.output, "CSV output path (stdout if omitted)");
}

std::vector<double> column(const std::vector<ConvergenceRow>& rows, bool x) {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (!r.failure) out.push_back(x ? r.x : r.error);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H-matrix BEM solver for the Laplace single layer on the unit cube"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string stats_path, load_prefix;

  auto* mesh = app.add_subcommand("mesh", "Mesh utilities");
  mesh->require_subcommand(1);
  auto* mesh_export = mesh->add_subcommand("export", "Write the cube mesh as plain text");
  mesh_export->add_option("--level", cfg.level, "Refinement level");
  mesh_export->add_option("-o,--output", cfg.output, "Output path (stdout if omitted)");

  auto* tree = app.add_subcommand("tree", "Dump the cluster tree of the cube mesh centers");
  tree->add_option("--level", cfg.level, "Refinement level");
  tree->add_option("--c-leaf", cfg.leaf_size, "Leaf size C_leaf")->check(CLI::PositiveNumber);
  tree->add_option("-o,--output", cfg.output, "Output path (stdout if omitted)");

  auto* blocks = app.add_subcommand("blocks", "Dump the leaves of the block cluster tree");
  blocks->add_option("--level", cfg.level, "Refinement level");
  blocks->add_option("--c-leaf", cfg.leaf_size, "Leaf size C_leaf")->check(CLI::PositiveNumber);
  blocks->add_option("--eta", cfg.eta, "Admissibility parameter")->check(CLI::NonNegativeNumber);
  blocks->add_option("-o,--output", cfg.output, "Output path (stdout if omitted)");

  auto* conv_h = app.add_subcommand("convergence-h", "Worst-case error over mesh refinement");
  conv_h->add_option("--levels", cfg.levels, "Refinement levels")->delimiter(',');
  conv_h->add_option("--k", cfg.k_max, "ACA rank")->check(CLI::PositiveNumber);
  conv_h->add_option("--workers", cfg.workers, "Worker count p")->check(CLI::PositiveNumber);
  add_common(conv_h, cfg);

  auto* conv_aca = app.add_subcommand("convergence-aca", "Worst-case error over the ACA rank");
  conv_aca->add_option("--level", cfg.level, "Refinement level");
  conv_aca->add_option("--k-list", cfg.k_list, "ACA ranks")->delimiter(',');
  conv_aca->add_option("--workers", cfg.workers, "Worker count p")->check(CLI::PositiveNumber);
  add_common(conv_aca, cfg);

  auto* bench = app.add_subcommand("benchmark", "Setup and CG timings over worker counts");
  bench->add_option("--level", cfg.level, "Refinement level");
  bench->add_option("--k", cfg.k_max, "ACA rank")->check(CLI::PositiveNumber);
  bench->add_option("--p-list", cfg.p_list, "Worker counts")->delimiter(',');
  bench->add_option("--timings", load_prefix, "Per-worker load CSV prefix, written as <prefix>_p<p>.csv");
  bench->add_option("--stats", stats_path, "Storage statistics (JSON lines)");
  add_common(bench, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (mesh_export->parsed()) {
      Sink out(cfg.output);
      write_mesh(out.get(), make_cube_mesh(cfg.level));
    } else if (tree->parsed()) {
      Sink out(cfg.output);
      const auto m = make_cube_mesh(cfg.level);
      ClusterTree(m.centers, cfg.leaf_size).dump(out.get());
    } else if (blocks->parsed()) {
      Sink out(cfg.output);
      const auto m = make_cube_mesh(cfg.level);
      const ClusterTree t(m.centers, cfg.leaf_size);
      dump_leaves(out.get(), build_block_cluster_tree(t, t, {cfg.eta, cfg.leaf_size}).tasks);
    } else if (conv_h->parsed()) {
      Sink out(cfg.output);
      const auto rows = cmd_convergence_h(cfg, out.get());
      const auto n = column(rows, true), err = column(rows, false);
      if (n.size() >= 2) {
        const double rate = fitted_rate(n, err);
        out.get() << "# fitted_rate=" << rate << '\n';
        std::cerr << "fitted rate " << rate << '\n';
      }
    } else if (conv_aca->parsed()) {
      Sink out(cfg.output);
      cmd_convergence_aca(cfg, out.get());
    } else if (bench->parsed()) {
      Sink out(cfg.output);
      const auto rows = cmd_benchmark(cfg, out.get(), load_prefix);
      if (!stats_path.empty() && !rows.empty()) {
        // Storage does not depend on p; report it once.
        Sink stats(stats_path);
        write_storage_stats(stats.get(), rows.front().outcome.storage);
      }
      for (const auto& r : rows) {
        std::cerr << "p=" << r.outcome.p << " iters=" << r.outcome.iters << " error=" << r.outcome.error
                  << " max_rel_diff_vs_first=" << r.max_rel_diff_vs_first << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

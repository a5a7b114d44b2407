#include <memory>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hmbem/bem_laplace.hpp"
#include "hmbem/blocktree.hpp"
#include "hmbem/clustering.hpp"
#include "hmbem/errors.hpp"
#include "hmbem/geometry.hpp"
#include "hmbem/hmatrix.hpp"
#include "hmbem/lowrank.hpp"
#include "hmbem/parallel.hpp"
#include "hmbem/solver.hpp"
#include "hmbem/study.hpp"

namespace py = pybind11;
using namespace hmbem;

namespace {

using Points = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

Points to_array(const std::vector<Point3>& pts) {
  Points out(static_cast<Eigen::Index>(pts.size()), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) out.row(static_cast<Eigen::Index>(i)) << pts[i].x, pts[i].y, pts[i].z;
  return out;
}

std::vector<Point3> from_array(const Eigen::Ref<const Points>& a) {
  std::vector<Point3> pts(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) pts[static_cast<std::size_t>(i)] = {a(i, 0), a(i, 1), a(i, 2)};
  return pts;
}

// Entries of a dense matrix; node coordinates are not needed by ACA itself.
class DenseEvaluator final : public EntryEvaluator {
 public:
  explicit DenseEvaluator(Eigen::MatrixXd A) : A_(std::move(A)) {}
  double get_matrix_entry(std::size_t i, std::size_t j) const override {
    return A_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  std::size_t row_count() const override { return static_cast<std::size_t>(A_.rows()); }
  std::size_t col_count() const override { return static_cast<std::size_t>(A_.cols()); }
  Point3 row_point(std::size_t) const override { return {}; }
  Point3 col_point(std::size_t) const override { return {}; }

 private:
  Eigen::MatrixXd A_;
};

Eigen::Matrix<std::size_t, Eigen::Dynamic, 4, Eigen::RowMajor> task_array(const std::vector<BlockTask>& tasks) {
  Eigen::Matrix<std::size_t, Eigen::Dynamic, 4, Eigen::RowMajor> out(static_cast<Eigen::Index>(tasks.size()), 4);
  for (std::size_t b = 0; b < tasks.size(); ++b) {
    const auto& t = tasks[b];
    out.row(static_cast<Eigen::Index>(b)) << t.row_lo, t.row_hi, t.col_lo, t.col_hi;
  }
  return out;
}

// Everything needed to apply the H-matrix of the Laplace problem on the cube.
struct CubeHMatrix {
  std::shared_ptr<const SurfaceMesh> mesh;
  std::unique_ptr<bem::LaplaceSlpEvaluator> ev;
  std::unique_ptr<ClusterTree> tree;
  BlockClusterTree blocks;
  HMatrix H;
};

std::shared_ptr<CubeHMatrix> assemble_cube(unsigned level, std::size_t k_max, double eta, std::size_t leaf_size,
                                           std::size_t threads, const bem::QuadratureConfig& quad) {
  auto c = std::make_shared<CubeHMatrix>();
  c->mesh = std::make_shared<const SurfaceMesh>(make_cube_mesh(level));
  c->ev = std::make_unique<bem::LaplaceSlpEvaluator>(c->mesh, quad);
  c->tree = std::make_unique<ClusterTree>(c->mesh->centers, leaf_size);
  c->blocks = build_block_cluster_tree(*c->tree, *c->tree, {eta, leaf_size});
  py::gil_scoped_release release;
  c->H = assemble(*c->ev, *c->tree, *c->tree, c->blocks.tasks, {k_max, 0.0}, threads);
  return c;
}

py::dict stats_dict(const StorageStats& s) {
  py::dict d;
  d["dense_blocks"] = s.dense_blocks;
  d["dense_entries"] = s.dense_entries;
  d["lowrank_blocks"] = s.lowrank_blocks;
  d["lowrank_entries"] = s.lowrank_entries;
  d["dense_equivalent"] = s.dense_equivalent;
  d["compression_ratio"] = s.compression_ratio();
  return d;
}

}  // namespace

PYBIND11_MODULE(_hmbem, m) {
  m.doc() = "H-matrix accelerated Galerkin BEM for the Laplace single layer";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_ArithmeticError);
  py::register_exception<BreakdownError>(m, "BreakdownError", PyExc_ArithmeticError);

  py::class_<bem::QuadratureConfig>(m, "QuadratureConfig")
      .def(py::init([](std::size_t far_order, std::size_t sing_order, double near_threshold) {
             return bem::QuadratureConfig{far_order, sing_order, near_threshold};
           }),
           py::arg("far_order") = 4, py::arg("sing_order") = 6, py::arg("near_threshold") = 2.0)
      .def_readwrite("far_order", &bem::QuadratureConfig::far_order)
      .def_readwrite("sing_order", &bem::QuadratureConfig::sing_order)
      .def_readwrite("near_threshold", &bem::QuadratureConfig::near_threshold);

  m.def(
      "cube_mesh",
      [](unsigned level) {
        const auto mesh = make_cube_mesh(level);
        Eigen::Matrix<std::uint32_t, Eigen::Dynamic, 4, Eigen::RowMajor> elements(
            static_cast<Eigen::Index>(mesh.size()), 4);
        for (std::size_t e = 0; e < mesh.size(); ++e) {
          for (int k = 0; k < 4; ++k) elements(static_cast<Eigen::Index>(e), k) = mesh.elements[e].vertex_ids[k];
        }
        py::dict d;
        d["vertices"] = to_array(mesh.vertices);
        d["elements"] = elements;
        d["centers"] = to_array(mesh.centers);
        d["areas"] = Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(mesh.areas.data(), static_cast<Eigen::Index>(mesh.size())));
        return d;
      },
      py::arg("level"), "Unit-cube surface mesh with 6*4^level square elements.");

  m.def("eval_points", [](unsigned grid_n) { return to_array(make_eval_points(grid_n)); }, py::arg("grid_n") = 5);

  m.def(
      "morton_code",
      [](const std::array<double, 3>& p, const std::array<double, 3>& lo, const std::array<double, 3>& hi) {
        return morton_code({p[0], p[1], p[2]}, BoundingBox{{lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]}}).code;
      },
      py::arg("p"), py::arg("lo") = std::array<double, 3>{0, 0, 0}, py::arg("hi") = std::array<double, 3>{1, 1, 1});

  m.def(
      "cluster_tree",
      [](const Eigen::Ref<const Points>& nodes, std::size_t leaf_size) {
        const ClusterTree tree(from_array(nodes), leaf_size);
        std::vector<std::pair<std::size_t, std::size_t>> leaves;
        for (const auto& c : tree.clusters()) {
          if (c.is_leaf()) leaves.emplace_back(c.lo, c.hi);
        }
        py::dict d;
        d["perm"] = tree.perm();
        d["iperm"] = tree.iperm();
        d["leaves"] = leaves;
        d["depth"] = tree.depth();
        return d;
      },
      py::arg("nodes"), py::arg("leaf_size") = 32,
      "Morton-ordered cluster tree; leaves are half-open ranges in sorted order.");

  m.def(
      "block_tasks",
      [](const Eigen::Ref<const Points>& nodes, double eta, std::size_t leaf_size) {
        const ClusterTree tree(from_array(nodes), leaf_size);
        const auto bt = build_block_cluster_tree(tree, tree, {eta, leaf_size});
        py::dict d;
        d["dense"] = task_array(bt.tasks.dense);
        d["admissible"] = task_array(bt.tasks.admissible);
        d["digest"] = bt.tasks.digest();
        return d;
      },
      py::arg("nodes"), py::arg("eta") = 1.0, py::arg("leaf_size") = 32,
      "Leaf blocks as rows (row_lo, row_hi, col_lo, col_hi) in sorted index order.");

  m.def(
      "aca",
      [](const Eigen::MatrixXd& A, std::size_t k_max, double rel_tol) {
        const DenseEvaluator ev(A);
        std::vector<std::size_t> rows(static_cast<std::size_t>(A.rows())), cols(static_cast<std::size_t>(A.cols()));
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
        auto R = aca(ev, rows, cols, {k_max, rel_tol});
        return py::make_tuple(R.U, R.V);
      },
      py::arg("A"), py::arg("k_max"), py::arg("rel_tol") = 0.0, "ACA with partial pivoting; returns (U, V), A ~ U V^T.");

  m.def(
      "lpt_assign",
      [](const std::vector<std::size_t>& costs, std::size_t workers) {
        auto r = lpt_assign(costs, workers);
        return py::make_tuple(r.assign, r.load);
      },
      py::arg("costs"), py::arg("workers"));

  m.def(
      "galerkin_matrix",
      [](unsigned level, const bem::QuadratureConfig& quad) {
        const bem::LaplaceSlpEvaluator ev(std::make_shared<const SurfaceMesh>(make_cube_mesh(level)), quad);
        py::gil_scoped_release release;
        return assemble_dense_oracle(ev);
      },
      py::arg("level"), py::arg("quad") = bem::QuadratureConfig{}, "Dense single-layer Galerkin matrix on the cube.");

  m.def(
      "rhs",
      [](unsigned level) { return bem::assemble_rhs(make_cube_mesh(level), bem::harmonic_data); },
      py::arg("level"), "Right-hand side for the Dirichlet data 4x^2 - 3y^2 - z^2.");

  py::class_<CubeHMatrix, std::shared_ptr<CubeHMatrix>>(m, "CubeHMatrix")
      .def_property_readonly("n", [](const CubeHMatrix& c) { return c.H.n_rows; })
      .def("matvec",
           [](const CubeHMatrix& c, const Eigen::VectorXd& x) {
             py::gil_scoped_release release;
             return matvec(c.H, x);
           })
      .def("to_dense", [](const CubeHMatrix& c) { return c.H.to_dense(); })
      .def("stats", [](const CubeHMatrix& c) { return stats_dict(c.H.stats()); });

  m.def("assemble_cube", &assemble_cube, py::arg("level"), py::arg("k_max") = 32, py::arg("eta") = 1.0,
        py::arg("leaf_size") = 32, py::arg("threads") = 1, py::arg("quad") = bem::QuadratureConfig{},
        "Assemble the H-matrix of the single-layer operator on the cube.");

  m.def(
      "cg_solve",
      [](const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply, const Eigen::VectorXd& f, double tol,
         std::size_t max_iters) {
        CgConfig cfg;
        cfg.rel_residual_tol = tol;
        cfg.max_iters = max_iters;
        const auto r = cg_solve(apply, f, cfg);
        py::dict d;
        d["alpha"] = r.alpha;
        d["iters"] = r.iters;
        d["rel_residual"] = r.final_rel_residual;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("apply"), py::arg("f"), py::arg("tol") = 1e-8, py::arg("max_iters") = 0,
      "Unpreconditioned CG from zero; `apply` maps a vector to A times it.");

  m.def(
      "solve_cube",
      [](unsigned level, std::size_t k_max, std::size_t workers, unsigned grid_n, const bem::QuadratureConfig& quad) {
        RunConfig cfg;
        cfg.grid_n = grid_n;
        cfg.quad = quad;
        SolveOutcome o;
        {
          py::gil_scoped_release release;
          o = solve_cube(cfg, level, k_max, workers);
        }
        py::dict d;
        d["n"] = o.n;
        d["error"] = o.error;
        d["iters"] = o.iters;
        d["rel_residual"] = o.rel_residual;
        d["converged"] = o.converged;
        d["setup_seconds"] = o.setup_seconds;
        d["alpha"] = o.alpha;
        d["storage"] = stats_dict(o.storage);
        return d;
      },
      py::arg("level"), py::arg("k_max") = 64, py::arg("workers") = 1, py::arg("grid_n") = 5,
      py::arg("quad") = bem::QuadratureConfig{},
      "Full pipeline on the cube; returns the worst-case potential error and solver statistics.");

  m.def("fitted_rate", [](const std::vector<double>& n, const std::vector<double>& err) { return fitted_rate(n, err); },
        py::arg("n"), py::arg("error"));
}

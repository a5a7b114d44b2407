#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hmbem/entry.hpp"
#include "hmbem/geometry.hpp"
#include "hmbem/quadrature.hpp"

namespace hmbem::bem {

struct QuadratureConfig {
  std::size_t far_order = 4;      // Gauss points per direction, regular pairs
  std::size_t sing_order = 6;     // Gauss points per direction, near/singular pairs
  double near_threshold = 2.0;    // near if center distance < threshold * max panel diameter
};

using ScalarField = std::function<double(const Point3&)>;

/// Laplace fundamental solution 1 / (4 pi |x - y|). Throws DomainError if x == y.
double kernel(const Point3& x, const Point3& y);

/// Galerkin entry for piecewise constants on two panels, including 1/(4 pi).
double panel_pair_entry(const Panel& p, const Panel& q, const QuadratureConfig& cfg);

/// Single-layer Galerkin matrix for piecewise constant basis functions,
/// one unknown per element with the element center as its node.
class LaplaceSlpEvaluator final : public EntryEvaluator {
 public:
  LaplaceSlpEvaluator(std::shared_ptr<const SurfaceMesh> mesh, QuadratureConfig cfg = {});

  double get_matrix_entry(std::size_t i, std::size_t j) const override { return galerkin_entry(i, j); }
  std::size_t row_count() const override { return mesh_->size(); }
  std::size_t col_count() const override { return mesh_->size(); }
  Point3 row_point(std::size_t i) const override { return mesh_->centers[i]; }
  Point3 col_point(std::size_t j) const override { return mesh_->centers[j]; }

  /// Evaluated as (min(i,j), max(i,j)) so the matrix is exactly symmetric.
  double galerkin_entry(std::size_t i, std::size_t j) const;

  const SurfaceMesh& mesh() const { return *mesh_; }
  const QuadratureConfig& config() const { return cfg_; }

 private:
  std::shared_ptr<const SurfaceMesh> mesh_;
  QuadratureConfig cfg_;
  GaussRule far_rule_, sing_rule_;
  std::vector<Panel> panels_;
  std::vector<PanelSamples> samples_;
};

/// f_i = integral of f over element i (tensor Gauss of the given order).
Eigen::VectorXd assemble_rhs(const SurfaceMesh& mesh, const ScalarField& f, std::size_t order = 4);

/// Single-layer potential sum_i alpha_i int_{T_i} G(x, y) dy at each point.
/// Throws DomainError for a point on the surface.
Eigen::VectorXd eval_potential(const SurfaceMesh& mesh, std::span<const double> alpha,
                               std::span<const Point3> points, std::size_t order = 4);

/// max over points of |exact(x) - potential(x)|.
double worst_case_error(const SurfaceMesh& mesh, std::span<const double> alpha,
                        std::span<const Point3> points, const ScalarField& exact,
                        std::size_t order = 4);

/// Dirichlet data 4x^2 - 3y^2 - z^2, the trace of a harmonic function.
double harmonic_data(const Point3& p);

}  // namespace hmbem::bem

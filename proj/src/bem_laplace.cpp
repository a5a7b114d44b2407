#include "hmbem/bem_laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hmbem/errors.hpp"

namespace hmbem::bem {

namespace {
constexpr double kInvFourPi = 0.25 * std::numbers::inv_pi;
}

double kernel(const Point3& x, const Point3& y) {
  const double r = distance(x, y);
  if (r == 0.0) throw DomainError("Laplace kernel evaluated at coincident points");
  return kInvFourPi / r;
}

namespace {

bool is_near(const Panel& p, const Panel& q, const QuadratureConfig& cfg) {
  return distance(p.center(), q.center()) < cfg.near_threshold * std::max(p.diameter(), q.diameter());
}

double checked(double raw) {
  const double value = kInvFourPi * raw;
  if (!std::isfinite(value)) throw QuadratureError("non-finite Galerkin entry");
  return value;
}

void check_config(const QuadratureConfig& cfg) {
  if (cfg.far_order == 0 || cfg.sing_order == 0) throw std::invalid_argument("quadrature orders must be >= 1");
  if (!(cfg.near_threshold >= 0.0)) throw std::invalid_argument("near_threshold must be nonnegative");
}

}  // namespace

double panel_pair_entry(const Panel& p, const Panel& q, const QuadratureConfig& cfg) {
  check_config(cfg);
  return checked(is_near(p, q, cfg) ? pair_integral_near(p, q, gauss_legendre(cfg.sing_order))
                                    : pair_integral_regular(p, q, gauss_legendre(cfg.far_order)));
}

LaplaceSlpEvaluator::LaplaceSlpEvaluator(std::shared_ptr<const SurfaceMesh> mesh, QuadratureConfig cfg)
    : mesh_(std::move(mesh)), cfg_(cfg) {
  if (!mesh_) throw std::invalid_argument("null mesh");
  check_config(cfg_);
  far_rule_ = gauss_legendre(cfg_.far_order);
  sing_rule_ = gauss_legendre(cfg_.sing_order);
  panels_.reserve(mesh_->size());
  samples_.reserve(mesh_->size());
  for (std::size_t e = 0; e < mesh_->size(); ++e) {
    panels_.push_back(mesh_->panel(e));
    samples_.emplace_back(panels_.back(), far_rule_);
  }
}

double LaplaceSlpEvaluator::galerkin_entry(std::size_t i, std::size_t j) const {
  if (i >= panels_.size() || j >= panels_.size()) {
    throw DimensionError("element index out of range: (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  if (i > j) std::swap(i, j);
  const Panel& p = panels_[i];
  const Panel& q = panels_[j];
  return checked(is_near(p, q, cfg_) ? pair_integral_near(p, q, sing_rule_)
                                     : pair_integral_regular(samples_[i], samples_[j]));
}

Eigen::VectorXd assemble_rhs(const SurfaceMesh& mesh, const ScalarField& f, std::size_t order) {
  const GaussRule rule = gauss_legendre(order);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(mesh.size()));
  for (std::size_t e = 0; e < mesh.size(); ++e) {
    const Panel p = mesh.panel(e);
    double sum = 0.0;
    for (std::size_t a = 0; a < rule.order(); ++a) {
      for (std::size_t b = 0; b < rule.order(); ++b) {
        sum += rule.weights[a] * rule.weights[b] * f(p.map(rule.nodes[a], rule.nodes[b]));
      }
    }
    rhs(static_cast<Eigen::Index>(e)) = sum * p.jacobian();
  }
  return rhs;
}

Eigen::VectorXd eval_potential(const SurfaceMesh& mesh, std::span<const double> alpha,
                               std::span<const Point3> points, std::size_t order) {
  if (alpha.size() != mesh.size()) throw DimensionError("coefficient vector does not match the mesh");
  const GaussRule rule = gauss_legendre(order);
  std::vector<Panel> panels;
  panels.reserve(mesh.size());
  for (std::size_t e = 0; e < mesh.size(); ++e) panels.push_back(mesh.panel(e));

  Eigen::VectorXd values(static_cast<Eigen::Index>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) {
    double sum = 0.0;
    for (std::size_t e = 0; e < panels.size(); ++e) {
      if (point_panel_distance(panels[e], points[k]) == 0.0) {
        throw DomainError("potential evaluated on the boundary surface");
      }
      sum += alpha[e] * point_panel_integral(panels[e], points[k], rule);
    }
    values(static_cast<Eigen::Index>(k)) = kInvFourPi * sum;
  }
  return values;
}

double worst_case_error(const SurfaceMesh& mesh, std::span<const double> alpha,
                        std::span<const Point3> points, const ScalarField& exact, std::size_t order) {
  const Eigen::VectorXd u = eval_potential(mesh, alpha, points, order);
  double worst = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    worst = std::max(worst, std::abs(exact(points[k]) - u(static_cast<Eigen::Index>(k))));
  }
  return worst;
}

double harmonic_data(const Point3& p) { return 4.0 * p.x * p.x - 3.0 * p.y * p.y - p.z * p.z; }

}  // namespace hmbem::bem

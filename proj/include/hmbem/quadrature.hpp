#pragma once

#include <cstddef>
#include <vector>

#include "hmbem/geometry.hpp"

namespace hmbem {

/// Gauss-Legendre rule on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t order() const { return nodes.size(); }
};

GaussRule gauss_legendre(std::size_t order);

/// Tensor-Gauss nodes of one panel, stored per coordinate; weights include
/// the surface Jacobian.
struct PanelSamples {
  std::vector<double> x, y, z, w;

  PanelSamples(const Panel& p, const GaussRule& rule);
  std::size_t size() const { return w.size(); }
};

/// Tensor-Gauss approximation of the double surface integral of 1/|x - y|
/// over two panels.
double pair_integral_regular(const Panel& p, const Panel& q, const GaussRule& rule);
double pair_integral_regular(const PanelSamples& p, const PanelSamples& q);

/// Double surface integral of 1/|x - y| for two axis-aligned rectangles that
/// may coincide, touch or lie close together.
///
/// The integral is rewritten in the relative coordinate z = x - y. Axes along
/// which both panels extend carry the (piecewise linear) convolution of the
/// two interval indicators as weight, so the problem becomes an integral of
/// weight(z) / |z| over a box of dimension 2 or 3. The box is cut at every
/// kink of the weight and at z = 0; sub-boxes with the singularity at a
/// corner are mapped with a Duffy transform (one pyramid per axis), the rest
/// are bisected towards the singularity and integrated with tensor Gauss.
/// Throws QuadratureError if a panel is not an axis-aligned rectangle.
double pair_integral_near(const Panel& p, const Panel& q, const GaussRule& rule);

/// Surface integral of 1/|x - y| over the panel for a fixed point x.
double point_panel_integral(const Panel& p, const Point3& x, const GaussRule& rule);

/// Distance from x to a rectangular panel.
double point_panel_distance(const Panel& p, const Point3& x);

}  // namespace hmbem

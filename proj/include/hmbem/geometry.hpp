#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hmbem {

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double operator[](std::size_t axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  double& operator[](std::size_t axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

  friend Point3 operator+(Point3 a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Point3 operator-(Point3 a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Point3 operator*(double s, const Point3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Point3&, const Point3&) = default;

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Point3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }

/// Flat parallelogram panel given by the affine map (s,t) -> origin + s*e1 + t*e2
/// over the unit square.
struct Panel {
  Point3 origin;
  Point3 e1, e2;

  Point3 map(double s, double t) const { return origin + s * e1 + t * e2; }
  /// Surface element |e1 x e2| (constant for a flat panel).
  double jacobian() const { return norm(cross(e1, e2)); }
  Point3 center() const { return map(0.5, 0.5); }
  double diameter() const { return std::max(norm(e1 + e2), norm(e1 - e2)); }
};

struct QuadElement {
  std::array<std::uint32_t, 4> vertex_ids{};
  std::uint8_t face_id = 0;
};

struct SurfaceMesh {
  std::vector<Point3> vertices;
  std::vector<QuadElement> elements;
  std::vector<Point3> centers;
  std::vector<double> areas;

  std::size_t size() const { return elements.size(); }
  /// Panel spanned by vertices 0, 1 and 3 of the element.
  Panel panel(std::size_t element) const;
  double total_area() const;
};

/// Default ceiling on cube mesh size (level 10, about 6.3 million panels).
inline constexpr std::size_t kDefaultMaxElements = std::size_t{6} << 20;

/// Surface of the unit cube with every face split into 2^level x 2^level squares.
/// Throws ResourceError if 6*4^level exceeds `max_elements`.
SurfaceMesh make_cube_mesh(unsigned level, std::size_t max_elements = kDefaultMaxElements);

/// grid_n^3 lattice points on [1/4, 3/4]^3 (the single midpoint when grid_n == 1).
std::vector<Point3> make_eval_points(unsigned grid_n);

/// Plain-text export: "n_vertices n_elements", vertex lines "x y z",
/// then element lines "v0 v1 v2 v3" with 0-based indices.
void write_mesh(std::ostream& out, const SurfaceMesh& mesh);

}  // namespace hmbem

#include "hmbem/geometry.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <string>

#include "hmbem/errors.hpp"

namespace hmbem {

Panel SurfaceMesh::panel(std::size_t element) const {
  const auto& ids = elements.at(element).vertex_ids;
  const Point3& v0 = vertices[ids[0]];
  return Panel{v0, vertices[ids[1]] - v0, vertices[ids[3]] - v0};
}

double SurfaceMesh::total_area() const {
  double sum = 0.0;
  for (double a : areas) sum += a;
  return sum;
}

namespace {

// Each face: fixed axis and value, then the two in-plane axes ordered so that
// u x v points out of the cube.
struct FaceFrame {
  int fixed_axis;
  int fixed_value;
  int u_axis;
  int v_axis;
};

constexpr std::array<FaceFrame, 6> kCubeFaces{{
    {0, 0, 2, 1},  // x = 0, normal -x
    {0, 1, 1, 2},  // x = 1, normal +x
    {1, 0, 0, 2},  // y = 0, normal -y
    {1, 1, 2, 0},  // y = 1, normal +y
    {2, 0, 1, 0},  // z = 0, normal -z
    {2, 1, 0, 1},  // z = 1, normal +z
}};

}  // namespace

SurfaceMesh make_cube_mesh(unsigned level, std::size_t max_elements) {
  if (level > 15) throw ResourceError("cube mesh level " + std::to_string(level) + " is too large");
  const std::size_t n = std::size_t{1} << level;
  const std::size_t count = 6 * n * n;
  if (count > max_elements) {
    throw ResourceError("cube mesh with " + std::to_string(count) +
                        " elements exceeds the limit of " + std::to_string(max_elements));
  }

  SurfaceMesh mesh;
  mesh.elements.reserve(count);
  mesh.vertices.reserve(6 * (n + 1) * (n + 1));

  // Lattice coordinates are integers in [0, n], so the vertex key is exact.
  std::map<std::array<std::uint32_t, 3>, std::uint32_t> vertex_ids;
  const double h = 1.0 / static_cast<double>(n);
  auto vertex = [&](const std::array<std::uint32_t, 3>& key) {
    auto [it, inserted] = vertex_ids.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
    if (inserted) mesh.vertices.push_back({key[0] * h, key[1] * h, key[2] * h});
    return it->second;
  };

  for (std::size_t f = 0; f < kCubeFaces.size(); ++f) {
    const FaceFrame& frame = kCubeFaces[f];
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t a = 0; a < n; ++a) {
        QuadElement element;
        element.face_id = static_cast<std::uint8_t>(f);
        constexpr std::array<std::array<std::size_t, 2>, 4> corners{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
        for (std::size_t c = 0; c < 4; ++c) {
          std::array<std::uint32_t, 3> key{};
          key[frame.fixed_axis] = static_cast<std::uint32_t>(frame.fixed_value * n);
          key[frame.u_axis] = static_cast<std::uint32_t>(a + corners[c][0]);
          key[frame.v_axis] = static_cast<std::uint32_t>(b + corners[c][1]);
          element.vertex_ids[c] = vertex(key);
        }
        mesh.elements.push_back(element);
      }
    }
  }

  mesh.centers.reserve(count);
  mesh.areas.reserve(count);
  for (const auto& e : mesh.elements) {
    Point3 c;
    for (auto id : e.vertex_ids) c = c + mesh.vertices[id];
    mesh.centers.push_back(0.25 * c);
    mesh.areas.push_back(mesh.panel(mesh.centers.size() - 1).jacobian());
  }
  return mesh;
}

std::vector<Point3> make_eval_points(unsigned grid_n) {
  if (grid_n == 0) throw std::invalid_argument("grid_n must be positive");
  std::vector<double> ticks(grid_n, 0.5);
  if (grid_n > 1) {
    for (unsigned i = 0; i < grid_n; ++i) ticks[i] = 0.25 + 0.5 * i / (grid_n - 1);
  }
  std::vector<Point3> points;
  points.reserve(std::size_t{grid_n} * grid_n * grid_n);
  for (double x : ticks)
    for (double y : ticks)
      for (double z : ticks) points.push_back({x, y, z});
  return points;
}

void write_mesh(std::ostream& out, const SurfaceMesh& mesh) {
  out << mesh.vertices.size() << ' ' << mesh.elements.size() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& v : mesh.vertices) out << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& e : mesh.elements) {
    out << e.vertex_ids[0] << ' ' << e.vertex_ids[1] << ' ' << e.vertex_ids[2] << ' '
        << e.vertex_ids[3] << '\n';
  }
}

}  // namespace hmbem

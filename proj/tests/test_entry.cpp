#include <memory>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hmbem/bem_laplace.hpp"
#include "hmbem/entry.hpp"
#include "hmbem/errors.hpp"
#include "support/test_support.hpp"

using namespace hmbem;

namespace {

class ThrowingEvaluator : public testing::IdentityEvaluator {
 public:
  using IdentityEvaluator::IdentityEvaluator;
  double get_matrix_entry(std::size_t i, std::size_t j) const override {
    if (i == 2 && j == 3) throw QuadratureError("bad entry");
    return IdentityEvaluator::get_matrix_entry(i, j);
  }
};

}  // namespace

TEST_CASE("1x1 block and identity block") {
  testing::IdentityEvaluator id(testing::line_points(4));
  const std::vector<std::size_t> one{2};
  CHECK(evaluate_block(id, one, one)(0, 0) == 1.0);
  const std::vector<std::size_t> all{0, 1, 2, 3};
  CHECK(evaluate_block(id, all, all) == Eigen::MatrixXd::Identity(4, 4));
}

TEST_CASE("far-apart level-0 panels match the midpoint estimate") {
  // Two level-0 cubes 20 apart along x; element i of the first cube and
  // element i of the second are parallel unit squares at distance 20.
  auto mesh = std::make_shared<SurfaceMesh>(make_cube_mesh(0));
  const std::size_t n = mesh->size(), nv = mesh->vertices.size();
  const Point3 shift{20, 0, 0};
  for (std::size_t v = 0; v < nv; ++v) mesh->vertices.push_back(mesh->vertices[v] + shift);
  for (std::size_t e = 0; e < n; ++e) {
    auto el = mesh->elements[e];
    for (auto& id : el.vertex_ids) id += static_cast<std::uint32_t>(nv);
    mesh->elements.push_back(el);
    mesh->centers.push_back(mesh->centers[e] + shift);
    mesh->areas.push_back(mesh->areas[e]);
  }
  bem::LaplaceSlpEvaluator ev(mesh);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = distance(mesh->centers[i], mesh->centers[i + n]);
    const double estimate = mesh->areas[i] * mesh->areas[i + n] / (4.0 * std::numbers::pi * d);
    CHECK(std::abs(ev.get_matrix_entry(i, i + n) - estimate) <= 0.1 * estimate);
  }
}

TEST_CASE("sub-block of a block equals the block's sub-matrix") {
  std::mt19937_64 rng(5);
  const auto xs = testing::random_points(30, {0, 0, 0}, 1.0, rng);
  const auto ys = testing::random_points(25, {3, 0, 0}, 1.0, rng);
  testing::PointKernelEvaluator ev(xs, ys);
  std::vector<std::size_t> rows(30), cols(25);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  const auto full = evaluate_block(ev, rows, cols);
  const std::vector<std::size_t> r{4, 17, 9}, c{0, 24, 3, 3};
  const auto sub = evaluate_block(ev, r, c);
  for (Eigen::Index a = 0; a < 3; ++a) {
    for (Eigen::Index b = 0; b < 4; ++b) CHECK(sub(a, b) == full(r[a], c[b]));
  }
}

TEST_CASE("evaluator failures carry block coordinates") {
  ThrowingEvaluator ev(testing::line_points(6));
  const std::vector<std::size_t> rows{1, 2}, cols{3, 4, 5};
  try {
    evaluate_block(ev, rows, cols);
    FAIL("expected BlockError");
  } catch (const BlockError& e) {
    CHECK(e.row_lo == 1);
    CHECK(e.row_hi == 3);
    CHECK(e.col_lo == 3);
    CHECK(e.col_hi == 6);
  }
}

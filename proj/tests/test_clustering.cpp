#include <random>
#include <sstream>

#include "doctest.h"
#include "hmbem/clustering.hpp"
#include "hmbem/errors.hpp"
#include "support/test_support.hpp"

using namespace hmbem;

namespace {

const BoundingBox kUnit{{0, 0, 0}, {1, 1, 1}};

// Structural checks shared by every tree in this file.
void check_tree(const ClusterTree& tree, std::span<const Point3> nodes) {
  const std::size_t n = nodes.size();
  CHECK(tree.root().lo == 0);
  CHECK(tree.root().hi == n);
  for (std::size_t s = 0; s < n; ++s) {
    CHECK(tree.iperm()[tree.perm()[s]] == s);
    CHECK(tree.sorted_nodes()[s] == nodes[tree.perm()[s]]);
  }
  std::vector<int> covered(n, 0);
  for (const auto& c : tree.clusters()) {
    CHECK(c.hi > c.lo);
    CHECK(c.is_leaf() == (c.size() <= tree.leaf_size()));
    // Tight bbox over the cluster's own nodes.
    const auto box = BoundingBox::of(std::span(tree.sorted_nodes()).subspan(c.lo, c.size()));
    CHECK(box.lo == c.bbox.lo);
    CHECK(box.hi == c.bbox.hi);
    if (c.is_leaf()) {
      for (std::size_t s = c.lo; s < c.hi; ++s) covered[s]++;
      continue;
    }
    const auto& a = tree[c.children[0]];
    const auto& b = tree[c.children[1]];
    CHECK(a.lo == c.lo);
    CHECK(a.hi == b.lo);
    CHECK(b.hi == c.hi);
    CHECK(a.size() - b.size() <= 1);
    CHECK(a.size() >= b.size());
    CHECK(c.bbox.contains(a.bbox));
    CHECK(c.bbox.contains(b.bbox));
    CHECK(a.depth == c.depth + 1);
  }
  for (int k : covered) CHECK(k == 1);
  const double bound = std::ceil(std::log2(static_cast<double>(n) / static_cast<double>(tree.leaf_size())));
  CHECK(tree.depth() <= std::max(0.0, bound) + 1);
}

std::size_t leaf_count(const ClusterTree& tree) {
  std::size_t k = 0;
  for (const auto& c : tree.clusters()) k += c.is_leaf();
  return k;
}

}  // namespace

TEST_CASE("bbox diameter and distance") {
  CHECK(bbox_diam(kUnit) == doctest::Approx(std::sqrt(3.0)));
  const BoundingBox far{{3, 0, 0}, {4, 1, 1}};
  CHECK(bbox_dist(kUnit, far) == 2.0);
  CHECK(bbox_dist(kUnit, BoundingBox{{0.5, 0.5, 0.5}, {2, 2, 2}}) == 0.0);
  CHECK(bbox_dist(kUnit, BoundingBox{{2, 3, 1}, {3, 4, 1}}) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("morton code examples") {
  CHECK(morton_code({0, 0, 0}, kUnit).code == 0);
  CHECK(morton_code({1, 1, 1}, kUnit).code == (std::uint64_t{1} << 63) - 1);
  CHECK(morton_code({0.5, 0, 0}, kUnit).code == std::uint64_t{1} << 62);
  CHECK(morton_code({0, 0.5, 0}, kUnit).code == std::uint64_t{1} << 61);
  CHECK(morton_code({0, 0, 0.5}, kUnit).code == std::uint64_t{1} << 60);
  CHECK(MortonCode::interleave(1, 0, 0).code == 4);
  CHECK(MortonCode::interleave(0, 0, 1).code == 1);
}

TEST_CASE("morton code domain check with relative slack") {
  CHECK_NOTHROW(morton_code({1.0 + 1e-13, 0, 0}, kUnit));
  CHECK_THROWS_AS(morton_code({1.0 + 1e-9, 0, 0}, kUnit), DomainError);
  CHECK_THROWS_AS(morton_code({-0.1, 0, 0}, kUnit), DomainError);
}

TEST_CASE("property: deinterleave then interleave is the identity") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint32_t> q(0, MortonCode::kAxisMax);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto m = MortonCode::interleave(q(rng), q(rng), q(rng));
    const auto [x, y, z] = m.deinterleave();
    CHECK(MortonCode::interleave(x, y, z) == m);
    CHECK(m.code < (std::uint64_t{1} << 63));
  }
}

TEST_CASE("five identical points form one degenerate leaf") {
  std::vector<Point3> pts(5, Point3{0.3, 0.3, 0.3});
  ClusterTree tree(pts, 32);
  CHECK(tree.clusters().size() == 1);
  CHECK(bbox_diam(tree.root().bbox) == 0.0);
  for (std::size_t s = 0; s < 5; ++s) CHECK(tree.perm()[s] == s);
}

TEST_CASE("five distinct points with leaf size 2 split 3|2 then 2|1") {
  const auto pts = testing::line_points(5);
  ClusterTree tree(pts, 2);
  CHECK(leaf_count(tree) == 3);
  const auto& r = tree.root();
  CHECK(tree[r.children[0]].size() == 3);
  CHECK(tree[r.children[1]].size() == 2);
  const auto& three = tree[r.children[0]];
  CHECK(tree[three.children[0]].size() == 2);
  CHECK(tree[three.children[1]].size() == 1);
  check_tree(tree, pts);
}

TEST_CASE("cube level 4 gives 64 leaves of 24") {
  const auto m = make_cube_mesh(4);
  ClusterTree tree(m.centers, 32);
  CHECK(leaf_count(tree) == 64);
  for (const auto& c : tree.clusters()) {
    if (c.is_leaf()) CHECK(c.size() == 24);
  }
  check_tree(tree, m.centers);
}

TEST_CASE("stable order for equal codes") {
  std::vector<Point3> pts{{1, 1, 1}, {0, 0, 0}, {0, 0, 0}, {1, 1, 1}, {0, 0, 0}};
  ClusterTree tree(pts, 8);
  CHECK(tree.perm() == std::vector<std::size_t>{1, 2, 4, 0, 3});
}

TEST_CASE("property: cluster tree invariants on random point clouds") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> size(1, 3000), leaf(1, 64);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pts = testing::random_points(size(rng), {-2, 5, 0}, 3.0, rng);
    ClusterTree tree(pts, leaf(rng));
    check_tree(tree, pts);
  }
}

TEST_CASE("tree dump lists one line per cluster") {
  ClusterTree tree(testing::line_points(5), 2);
  std::ostringstream out;
  tree.dump(out);
  const auto text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

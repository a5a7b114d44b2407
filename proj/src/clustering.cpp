#include "hmbem/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "hmbem/errors.hpp"

namespace hmbem {

BoundingBox BoundingBox::of(std::span<const Point3> points) {
  if (points.empty()) throw std::invalid_argument("bounding box of an empty point set");
  BoundingBox box{points.front(), points.front()};
  for (const auto& p : points) {
    for (std::size_t a = 0; a < 3; ++a) {
      box.lo[a] = std::min(box.lo[a], p[a]);
      box.hi[a] = std::max(box.hi[a], p[a]);
    }
  }
  return box;
}

bool BoundingBox::contains(const BoundingBox& other) const {
  for (std::size_t a = 0; a < 3; ++a) {
    if (other.lo[a] < lo[a] || other.hi[a] > hi[a]) return false;
  }
  return true;
}

void BoundingBox::expand(const BoundingBox& other) {
  for (std::size_t a = 0; a < 3; ++a) {
    lo[a] = std::min(lo[a], other.lo[a]);
    hi[a] = std::max(hi[a], other.hi[a]);
  }
}

double bbox_diam(const BoundingBox& b) { return distance(b.lo, b.hi); }

double bbox_dist(const BoundingBox& a, const BoundingBox& b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double gap = std::max({0.0, a.lo[k] - b.hi[k], b.lo[k] - a.hi[k]});
    sum += gap * gap;
  }
  return std::sqrt(sum);
}

namespace {

// Spreads the low 21 bits of v so that bit i lands on bit 3i.
std::uint64_t spread3(std::uint32_t v) {
  std::uint64_t x = v & MortonCode::kAxisMax;
  x = (x | x << 32) & 0x1f00000000ffffULL;
  x = (x | x << 16) & 0x1f0000ff0000ffULL;
  x = (x | x << 8) & 0x100f00f00f00f00fULL;
  x = (x | x << 4) & 0x10c30c30c30c30c3ULL;
  x = (x | x << 2) & 0x1249249249249249ULL;
  return x;
}

std::uint32_t compact3(std::uint64_t x) {
  x &= 0x1249249249249249ULL;
  x = (x ^ (x >> 2)) & 0x10c30c30c30c30c3ULL;
  x = (x ^ (x >> 4)) & 0x100f00f00f00f00fULL;
  x = (x ^ (x >> 8)) & 0x1f0000ff0000ffULL;
  x = (x ^ (x >> 16)) & 0x1f00000000ffffULL;
  x = (x ^ (x >> 32)) & 0x1fffffULL;
  return static_cast<std::uint32_t>(x);
}

}  // namespace

MortonCode MortonCode::interleave(std::uint32_t qx, std::uint32_t qy, std::uint32_t qz) {
  return {spread3(qx) << 2 | spread3(qy) << 1 | spread3(qz)};
}

std::array<std::uint32_t, 3> MortonCode::deinterleave() const {
  return {compact3(code >> 2), compact3(code >> 1), compact3(code)};
}

MortonCode morton_code(const Point3& p, const BoundingBox& box) {
  const double slack = 1e-12 * std::max(1.0, bbox_diam(box));
  std::array<std::uint32_t, 3> q{};
  for (std::size_t a = 0; a < 3; ++a) {
    if (!(p[a] >= box.lo[a] - slack && p[a] <= box.hi[a] + slack)) {
      throw DomainError("point outside the Morton bounding box");
    }
    const double extent = box.hi[a] - box.lo[a];
    const double t = extent > 0.0 ? (p[a] - box.lo[a]) / extent : 0.0;
    const double scaled = std::floor(t * static_cast<double>(std::uint64_t{1} << MortonCode::kBitsPerAxis));
    q[a] = static_cast<std::uint32_t>(std::clamp(scaled, 0.0, static_cast<double>(MortonCode::kAxisMax)));
  }
  return MortonCode::interleave(q[0], q[1], q[2]);
}

ClusterTree::ClusterTree(std::span<const Point3> nodes, std::size_t leaf_size)
    : leaf_size_(leaf_size) {
  if (nodes.empty()) throw std::invalid_argument("cluster tree over an empty node set");
  if (leaf_size == 0) throw std::invalid_argument("leaf size must be positive");

  const BoundingBox global = BoundingBox::of(nodes);
  std::vector<MortonCode> codes(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) codes[i] = morton_code(nodes[i], global);

  perm_.resize(nodes.size());
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  std::stable_sort(perm_.begin(), perm_.end(),
                   [&](std::size_t a, std::size_t b) { return codes[a] < codes[b]; });
  iperm_.resize(nodes.size());
  sorted_.resize(nodes.size());
  for (std::size_t s = 0; s < perm_.size(); ++s) {
    iperm_[perm_[s]] = s;
    sorted_[s] = nodes[perm_[s]];
  }

  clusters_.reserve(2 * (nodes.size() / leaf_size + 1));
  build(0, nodes.size(), 0);
}

std::size_t ClusterTree::build(std::size_t lo, std::size_t hi, unsigned depth) {
  const std::size_t id = clusters_.size();
  clusters_.push_back(Cluster{lo, hi, {}, {kNoChild, kNoChild}, depth});
  depth_ = std::max(depth_, depth);

  if (hi - lo <= leaf_size_) {
    clusters_[id].bbox = BoundingBox::of(std::span(sorted_).subspan(lo, hi - lo));
    return id;
  }
  const std::size_t mid = lo + (hi - lo + 1) / 2;
  const std::size_t left = build(lo, mid, depth + 1);
  const std::size_t right = build(mid, hi, depth + 1);
  BoundingBox box = clusters_[left].bbox;
  box.expand(clusters_[right].bbox);
  clusters_[id].bbox = box;
  clusters_[id].children = {left, right};
  return id;
}

void ClusterTree::dump(std::ostream& out) const {
  for (const auto& c : clusters_) {
    out << std::string(2 * c.depth, ' ') << '[' << c.lo << ", " << c.hi << ") diam "
        << bbox_diam(c.bbox) << (c.is_leaf() ? " leaf" : "") << '\n';
  }
}

}  // namespace hmbem

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "hmbem/geometry.hpp"

namespace hmbem {

/// Axis-aligned box [lo, hi].
struct BoundingBox {
  Point3 lo, hi;

  static BoundingBox of(std::span<const Point3> points);
  bool contains(const BoundingBox& other) const;
  void expand(const BoundingBox& other);
};

/// Length of the box diagonal.
double bbox_diam(const BoundingBox& b);
/// Euclidean distance between two boxes as point sets (0 if they intersect).
double bbox_dist(const BoundingBox& a, const BoundingBox& b);

/// 63-bit Morton key: 21 bits per axis, interleaved so that x holds the
/// most significant bit of every triple.
struct MortonCode {
  std::uint64_t code = 0;

  static constexpr unsigned kBitsPerAxis = 21;
  static constexpr std::uint32_t kAxisMax = (1u << kBitsPerAxis) - 1;

  static MortonCode interleave(std::uint32_t qx, std::uint32_t qy, std::uint32_t qz);
  std::array<std::uint32_t, 3> deinterleave() const;

  friend auto operator<=>(const MortonCode&, const MortonCode&) = default;
};

/// Throws DomainError when p lies outside `box` (inflated by 1e-12 relative slack).
MortonCode morton_code(const Point3& p, const BoundingBox& box);

inline constexpr std::size_t kNoChild = static_cast<std::size_t>(-1);

struct Cluster {
  std::size_t lo = 0, hi = 0;  // half-open range into the sorted node array
  BoundingBox bbox;
  std::array<std::size_t, 2> children{kNoChild, kNoChild};
  unsigned depth = 0;

  std::size_t size() const { return hi - lo; }
  bool is_leaf() const { return children[0] == kNoChild; }
};

/// Binary cardinality-balanced tree over Morton-sorted nodes. Clusters are
/// stored in pre-order; cluster 0 is the root covering [0, N).
class ClusterTree {
 public:
  ClusterTree(std::span<const Point3> nodes, std::size_t leaf_size);

  const Cluster& root() const { return clusters_.front(); }
  const Cluster& operator[](std::size_t id) const { return clusters_[id]; }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  std::size_t size() const { return perm_.size(); }
  std::size_t leaf_size() const { return leaf_size_; }
  unsigned depth() const { return depth_; }

  /// perm()[s] is the application index of the node at sorted position s.
  const std::vector<std::size_t>& perm() const { return perm_; }
  /// iperm()[i] is the sorted position of application index i.
  const std::vector<std::size_t>& iperm() const { return iperm_; }
  const std::vector<Point3>& sorted_nodes() const { return sorted_; }

  /// Indented text rendering, one cluster per line.
  void dump(std::ostream& out) const;

 private:
  std::size_t build(std::size_t lo, std::size_t hi, unsigned depth);

  std::size_t leaf_size_;
  std::vector<std::size_t> perm_, iperm_;
  std::vector<Point3> sorted_;
  std::vector<Cluster> clusters_;
  unsigned depth_ = 0;
};

}  // namespace hmbem

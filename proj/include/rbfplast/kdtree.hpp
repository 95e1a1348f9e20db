#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbfplast/types.hpp"

namespace rbfplast {

// Balanced 2D k-d tree over a fixed point set. Queries are exact: results
// are ordered by (distance, index), so equidistant points resolve by ordinal.
class NeighborIndex {
 public:
  NeighborIndex() = default;
  explicit NeighborIndex(std::span<const Vec2> points);

  std::size_t size() const { return points_.size(); }

  // The n nearest points to p, sorted by nondecreasing distance.
  std::vector<std::size_t> query(const Vec2& p, std::size_t n) const;

  // All points with distance <= radius, sorted by (distance, index).
  std::vector<std::size_t> query_radius(const Vec2& p, double radius) const;

 private:
  struct Node {
    std::size_t begin;  // range into order_
    std::size_t end;
    int axis;           // -1 for leaves
    double split;
    std::size_t left;
    std::size_t right;
  };

  std::size_t build(std::size_t begin, std::size_t end, int depth);

  std::vector<Vec2> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace rbfplast

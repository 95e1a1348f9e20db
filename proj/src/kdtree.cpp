#include "rbfplast/kdtree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>
#include <utility>

#include "rbfplast/errors.hpp"

namespace rbfplast {

namespace {

constexpr std::size_t kLeafSize = 8;

using Candidate = std::pair<double, std::size_t>;  // (squared distance, index)

double coord(const Vec2& p, int axis) { return axis == 0 ? p.x : p.y; }

}  // namespace

NeighborIndex::NeighborIndex(std::span<const Vec2> points) : points_(points.begin(), points.end()), order_(points.size()) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    build(0, points_.size(), 0);
  }
}

std::size_t NeighborIndex::build(std::size_t begin, std::size_t end, int depth) {
  const std::size_t id = nodes_.size();
  nodes_.push_back({begin, end, -1, 0.0, 0, 0});
  if (end - begin <= kLeafSize) return id;

  // Split along the wider extent of the bounding box.
  double minx = points_[order_[begin]].x, maxx = minx;
  double miny = points_[order_[begin]].y, maxy = miny;
  for (std::size_t i = begin; i < end; ++i) {
    const Vec2& q = points_[order_[i]];
    minx = std::min(minx, q.x);
    maxx = std::max(maxx, q.x);
    miny = std::min(miny, q.y);
    maxy = std::max(maxy, q.y);
  }
  const int axis = (maxx - minx >= maxy - miny) ? 0 : 1;
  (void)depth;

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                     return coord(points_[a], axis) < coord(points_[b], axis);
                   });
  const double split = coord(points_[order_[mid]], axis);
  const std::size_t left = build(begin, mid, depth + 1);
  const std::size_t right = build(mid, end, depth + 1);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<std::size_t> NeighborIndex::query(const Vec2& p, std::size_t n) const {
  if (n > points_.size()) {
    std::ostringstream msg;
    msg << "NeighborIndex::query: requested " << n << " neighbors from " << points_.size() << " points";
    throw InvalidArgument(msg.str());
  }
  if (n == 0) return {};

  // Max-heap on (d2, index): the top is the current worst candidate.
  std::priority_queue<Candidate> heap;
  const auto visit = [&](auto&& self, std::size_t id) -> void {
    const Node& node = nodes_[id];
    if (node.axis < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        const Candidate c{squared_distance(p, points_[idx]), idx};
        if (heap.size() < n) {
          heap.push(c);
        } else if (c < heap.top()) {
          heap.pop();
          heap.push(c);
        }
      }
      return;
    }
    const double diff = coord(p, node.axis) - node.split;
    const std::size_t near = diff < 0 ? node.left : node.right;
    const std::size_t far = diff < 0 ? node.right : node.left;
    self(self, near);
    // Ties must still be visited so that ordinal tie-breaking stays exact.
    if (heap.size() < n || diff * diff <= heap.top().first) self(self, far);
  };
  visit(visit, 0);

  std::vector<std::size_t> out(heap.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = heap.top().second;
    heap.pop();
  }
  return out;
}

std::vector<std::size_t> NeighborIndex::query_radius(const Vec2& p, double radius) const {
  std::vector<Candidate> found;
  if (points_.empty()) return {};
  const double r2 = radius * radius;
  const auto visit = [&](auto&& self, std::size_t id) -> void {
    const Node& node = nodes_[id];
    if (node.axis < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        const double d2 = squared_distance(p, points_[idx]);
        if (d2 <= r2) found.push_back({d2, idx});
      }
      return;
    }
    const double diff = coord(p, node.axis) - node.split;
    const std::size_t near = diff < 0 ? node.left : node.right;
    const std::size_t far = diff < 0 ? node.right : node.left;
    self(self, near);
    if (diff * diff <= r2) self(self, far);
  };
  visit(visit, 0);
  std::sort(found.begin(), found.end());
  std::vector<std::size_t> out;
  out.reserve(found.size());
  for (const auto& c : found) out.push_back(c.second);
  return out;
}

}  // namespace rbfplast

#include "obsloc/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "obsloc/errors.hpp"

namespace obsloc {

namespace {

struct Candidate {
  double d2;
  int id;
  // Max-heap ordering: the worst candidate (largest distance, then largest
  // index) sits on top.
  bool operator<(const Candidate& o) const {
    if (d2 != o.d2) return d2 < o.d2;
    return id < o.id;
  }
};

}  // namespace

KdTree::KdTree(const PointCloud& cloud) {
  if (cloud.empty()) throw EmptyCloud("cannot build a spatial index over an empty cloud");
  const std::int32_t n = static_cast<std::int32_t>(cloud.size());
  items_.resize(static_cast<std::size_t>(n));
  for (std::int32_t i = 0; i < n; ++i) items_[i] = {cloud.points[i], i};
  nodes_.reserve(static_cast<std::size_t>(2 * n / kLeafSize + 8));
  root_ = build(0, n);
}

std::int32_t KdTree::build(std::int32_t begin, std::int32_t end) {
  const std::int32_t idx = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= kLeafSize) {
    nodes_[idx].begin = begin;
    nodes_[idx].end = end;
    return idx;
  }

  Eigen::Vector3d lo = items_[begin].first, hi = items_[begin].first;
  for (std::int32_t i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(items_[i].first);
    hi = hi.cwiseMax(items_[i].first);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);

  const std::int32_t mid = begin + (end - begin) / 2;
  std::nth_element(items_.begin() + begin, items_.begin() + mid, items_.begin() + end,
                   [axis](const Item& a, const Item& b) { return a.first[axis] < b.first[axis]; });

  nodes_[idx].axis = axis;
  nodes_[idx].split = items_[mid].first[axis];
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  nodes_[idx].left = left;
  nodes_[idx].right = right;
  return idx;
}

std::pair<int, double> KdTree::nearest(const Eigen::Vector3d& query) const {
  double best_d2 = std::numeric_limits<double>::infinity();
  int best_id = -1;

  std::int32_t stack[64];
  int top = 0;
  stack[top++] = root_;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (node.axis < 0) {
      for (std::int32_t i = node.begin; i < node.end; ++i) {
        const double d2 = (items_[i].first - query).squaredNorm();
        if (d2 < best_d2 || (d2 == best_d2 && items_[i].second < best_id)) {
          best_d2 = d2;
          best_id = items_[i].second;
        }
      }
      continue;
    }
    const double diff = query[node.axis] - node.split;
    const std::int32_t near = diff < 0.0 ? node.left : node.right;
    const std::int32_t far = diff < 0.0 ? node.right : node.left;
    // The far side is pushed first and re-tested against the final best when
    // popped. Equal-distance boundaries must be descended so the
    // smallest-index tie rule matches a linear scan exactly.
    if (diff * diff <= best_d2) stack[top++] = far;
    stack[top++] = near;
  }
  return {best_id, std::sqrt(best_d2)};
}

std::vector<std::pair<int, double>> KdTree::k_nearest(const Eigen::Vector3d& query, int k) const {
  std::vector<std::pair<int, double>> out;
  if (k <= 0) return out;
  const int kk = std::min<int>(k, static_cast<int>(items_.size()));

  std::vector<Candidate> heap;
  heap.reserve(static_cast<std::size_t>(kk) + 1);
  double worst_d2 = std::numeric_limits<double>::infinity();
  int worst_id = std::numeric_limits<int>::max();

  std::int32_t stack[64];
  int top = 0;
  stack[top++] = root_;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (node.axis < 0) {
      for (std::int32_t i = node.begin; i < node.end; ++i) {
        const double d2 = (items_[i].first - query).squaredNorm();
        const int id = items_[i].second;
        const bool better = static_cast<int>(heap.size()) < kk || d2 < worst_d2 ||
                            (d2 == worst_d2 && id < worst_id);
        if (!better) continue;
        if (static_cast<int>(heap.size()) == kk) {
          std::pop_heap(heap.begin(), heap.end());
          heap.pop_back();
        }
        heap.push_back({d2, id});
        std::push_heap(heap.begin(), heap.end());
        if (static_cast<int>(heap.size()) == kk) {
          worst_d2 = heap.front().d2;
          worst_id = heap.front().id;
        }
      }
      continue;
    }
    const double diff = query[node.axis] - node.split;
    const std::int32_t near = diff < 0.0 ? node.left : node.right;
    const std::int32_t far = diff < 0.0 ? node.right : node.left;
    if (static_cast<int>(heap.size()) < kk || diff * diff <= worst_d2) stack[top++] = far;
    stack[top++] = near;
  }

  std::sort(heap.begin(), heap.end());
  out.reserve(heap.size());
  for (const Candidate& c : heap) out.emplace_back(c.id, std::sqrt(c.d2));
  return out;
}

}  // namespace obsloc

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace twistspin {

/// Axis-aligned bounding box in D dimensions.
template <int D>
struct Aabb {
  using Point = Eigen::Matrix<double, D, 1>;
  Point lo = Point::Constant(std::numeric_limits<double>::infinity());
  Point hi = Point::Constant(-std::numeric_limits<double>::infinity());

  void expand(const Point& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void expand(const Aabb& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  void inflate(double pad) {
    lo.array() -= pad;
    hi.array() += pad;
  }
  bool overlaps(const Aabb& b) const {
    return (lo.array() <= b.hi.array()).all() && (b.lo.array() <= hi.array()).all();
  }
  bool contains(const Point& p) const {
    return (lo.array() <= p.array()).all() && (p.array() <= hi.array()).all();
  }
  double distance_to(const Point& p) const {
    const Point d = (lo - p).cwiseMax(p - hi).cwiseMax(Point::Zero());
    return d.norm();
  }
};

/// Static bounding-volume hierarchy over a set of boxes (median split on the
/// widest axis, leaves of at most kLeafSize items).
template <int D>
class Bvh {
 public:
  using Box = Aabb<D>;
  using Point = typename Box::Point;
  static constexpr int kLeafSize = 4;

  Bvh() = default;

  explicit Bvh(std::vector<Box> boxes) : boxes_(std::move(boxes)) {
    order_.resize(boxes_.size());
    std::iota(order_.begin(), order_.end(), 0);
    if (!boxes_.empty()) build(0, static_cast<int>(order_.size()));
  }

  std::size_t size() const { return boxes_.size(); }
  const Box& box(int i) const { return boxes_[i]; }

  /// All pairs (i < j) of items whose boxes overlap, sorted.
  std::vector<std::pair<int, int>> self_overlaps() const {
    std::vector<std::pair<int, int>> out;
    if (nodes_.empty()) return out;
    self_pairs(0, 0, out);
    for (auto& p : out) {
      if (p.first > p.second) std::swap(p.first, p.second);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Items whose box overlaps `query`.
  template <typename Fn>
  void visit_overlapping(const Box& query, Fn&& fn) const {
    if (nodes_.empty()) return;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const Node& n = nodes_[stack.back()];
      stack.pop_back();
      if (!n.box.overlaps(query)) continue;
      if (n.leaf()) {
        for (int k = n.begin; k < n.end; ++k) {
          if (boxes_[order_[k]].overlaps(query)) fn(order_[k]);
        }
      } else {
        stack.push_back(n.left);
        stack.push_back(n.right);
      }
    }
  }

  /// Visits items in roughly nearest-first order; `fn(item, box_distance)` returns
  /// the current pruning radius (items whose box is farther are skipped).
  template <typename Fn>
  void visit_near(const Point& p, double radius, Fn&& fn) const {
    if (nodes_.empty()) return;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const Node& n = nodes_[stack.back()];
      stack.pop_back();
      if (n.box.distance_to(p) > radius) continue;
      if (n.leaf()) {
        for (int k = n.begin; k < n.end; ++k) {
          const double d = boxes_[order_[k]].distance_to(p);
          if (d <= radius) radius = fn(order_[k], d);
        }
      } else {
        const double dl = nodes_[n.left].box.distance_to(p);
        const double dr = nodes_[n.right].box.distance_to(p);
        if (dl < dr) {
          stack.push_back(n.right);
          stack.push_back(n.left);
        } else {
          stack.push_back(n.left);
          stack.push_back(n.right);
        }
      }
    }
  }

 private:
  struct Node {
    Box box;
    int begin = 0;
    int end = 0;
    int left = -1;
    int right = -1;
    bool leaf() const { return left < 0; }
  };

  int build(int begin, int end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{});
    Box box;
    Box centroids;
    for (int k = begin; k < end; ++k) {
      box.expand(boxes_[order_[k]]);
      centroids.expand(Point(0.5 * (boxes_[order_[k]].lo + boxes_[order_[k]].hi)));
    }
    nodes_[id].box = box;
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    if (end - begin <= kLeafSize) return id;
    int axis = 0;
    (centroids.hi - centroids.lo).maxCoeff(&axis);
    const int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) {
                       const double ca = boxes_[a].lo[axis] + boxes_[a].hi[axis];
                       const double cb = boxes_[b].lo[axis] + boxes_[b].hi[axis];
                       return ca < cb || (ca == cb && a < b);
                     });
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  void self_pairs(int a, int b, std::vector<std::pair<int, int>>& out) const {
    const Node& na = nodes_[a];
    const Node& nb = nodes_[b];
    if (!na.box.overlaps(nb.box)) return;
    if (na.leaf() && nb.leaf()) {
      for (int i = na.begin; i < na.end; ++i) {
        const int start = (a == b) ? i + 1 : nb.begin;
        for (int j = start; j < nb.end; ++j) {
          if (boxes_[order_[i]].overlaps(boxes_[order_[j]])) out.emplace_back(order_[i], order_[j]);
        }
      }
      return;
    }
    if (a == b) {
      self_pairs(na.left, na.left, out);
      self_pairs(na.right, na.right, out);
      self_pairs(na.left, na.right, out);
      return;
    }
    if (na.leaf() || (!nb.leaf() && nb.end - nb.begin > na.end - na.begin)) {
      self_pairs(a, nb.left, out);
      self_pairs(a, nb.right, out);
    } else {
      self_pairs(na.left, b, out);
      self_pairs(na.right, b, out);
    }
  }

  std::vector<Box> boxes_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

}  // namespace twistspin

// Exact k-NN over feature rows with deterministic tie-breaking.
//
// Static feature rows repeat heavily (every pavement cell is identical), so
// the k-d tree is built over distinct rows only. For a query row the
// (k+1)-th smallest distinct-row distance bounds the search radius; every
// member of every distinct row inside that radius is a candidate, and the
// final k are chosen by (distance, node index).

#include <algorithm>
#include <numeric>
#include <queue>

#include "ugk/graph.hpp"

namespace ugk {
namespace {

class KdTree {
 public:
  KdTree(const Matrix& points) : points_(points), order_(points.rows) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (!order_.empty()) root_ = build(0, order_.size());
  }

  /// m-th smallest squared distance from q to the stored points (m >= 1).
  double kth_distance_sq(std::span<const double> q, std::size_t m) const {
    std::priority_queue<double> heap;
    kth_search(root_, q, m, heap);
    return heap.top();
  }

  /// All stored points with squared distance <= r2.
  void radius_search(std::span<const double> q, double r2, std::vector<std::size_t>& out) const {
    radius_search(root_, q, r2, out);
  }

 private:
  struct Node {
    std::size_t lo = 0, hi = 0;
    std::size_t dim = 0;
    double split = 0.0;
    int left = -1, right = -1;
  };

  static constexpr std::size_t kLeafSize = 8;

  std::span<const double> row(std::size_t i) const {
    return {points_.values.data() + i * points_.cols, points_.cols};
  }

  int build(std::size_t lo, std::size_t hi) {
    Node node;
    node.lo = lo;
    node.hi = hi;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (hi - lo <= kLeafSize) return id;

    std::size_t best_dim = 0;
    double best_spread = -1.0;
    for (std::size_t d = 0; d < points_.cols; ++d) {
      double lo_v = points_(order_[lo], d), hi_v = lo_v;
      for (std::size_t i = lo; i < hi; ++i) {
        lo_v = std::min(lo_v, points_(order_[i], d));
        hi_v = std::max(hi_v, points_(order_[i], d));
      }
      if (hi_v - lo_v > best_spread) {
        best_spread = hi_v - lo_v;
        best_dim = d;
      }
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(order_.begin() + static_cast<long>(lo), order_.begin() + static_cast<long>(mid),
                     order_.begin() + static_cast<long>(hi), [&](std::size_t a, std::size_t b) {
                       const double va = points_(a, best_dim), vb = points_(b, best_dim);
                       return va < vb || (va == vb && a < b);
                     });
    const double split = points_(order_[mid], best_dim);
    const int left = build(lo, mid);
    const int right = build(mid, hi);
    nodes_[static_cast<std::size_t>(id)].dim = best_dim;
    nodes_[static_cast<std::size_t>(id)].split = split;
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
  }

  void kth_search(int id, std::span<const double> q, std::size_t m, std::priority_queue<double>& heap) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.left < 0) {
      for (std::size_t i = n.lo; i < n.hi; ++i) {
        const double d2 = feature_distance_sq(q, row(order_[i]));
        if (heap.size() < m) {
          heap.push(d2);
        } else if (d2 < heap.top()) {
          heap.pop();
          heap.push(d2);
        }
      }
      return;
    }
    const double diff = q[n.dim] - n.split;
    const int near = diff < 0.0 ? n.left : n.right;
    const int far = diff < 0.0 ? n.right : n.left;
    kth_search(near, q, m, heap);
    if (heap.size() < m || diff * diff <= heap.top()) kth_search(far, q, m, heap);
  }

  void radius_search(int id, std::span<const double> q, double r2, std::vector<std::size_t>& out) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.left < 0) {
      for (std::size_t i = n.lo; i < n.hi; ++i) {
        if (feature_distance_sq(q, row(order_[i])) <= r2) out.push_back(order_[i]);
      }
      return;
    }
    const double diff = q[n.dim] - n.split;
    const int near = diff < 0.0 ? n.left : n.right;
    const int far = diff < 0.0 ? n.right : n.left;
    radius_search(near, q, r2, out);
    if (diff * diff <= r2) radius_search(far, q, r2, out);
  }

  const Matrix& points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace

EdgeList build_similarity_edges(const Matrix& features, std::size_t k) {
  const std::size_t n = features.rows;
  if (n <= k) {
    throw Error(ErrorCode::TooFewNodes,
                "k-NN needs more than k=" + std::to_string(k) + " nodes, got " + std::to_string(n));
  }
  const std::size_t dim = features.cols;
  auto row = [&](std::size_t i) { return std::span<const double>(features.values.data() + i * dim, dim); };

  // Group identical rows; members of each group stay in ascending index order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ra = row(a), rb = row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  std::vector<std::vector<std::uint32_t>> members;
  std::vector<std::size_t> group_of(n);
  Matrix distinct(0, dim);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::size_t i = order[idx];
    if (idx == 0 || !std::equal(row(i).begin(), row(i).end(), row(order[idx - 1]).begin())) {
      members.emplace_back();
      distinct.values.insert(distinct.values.end(), row(i).begin(), row(i).end());
      ++distinct.rows;
    }
    members.back().push_back(static_cast<std::uint32_t>(i));
    group_of[i] = members.size() - 1;
  }
  for (auto& m : members) std::sort(m.begin(), m.end());

  const KdTree tree(distinct);
  const std::size_t m = std::min(k + 1, distinct.rows);

  EdgeList edges;
  edges.reserve(n * k);
  std::vector<std::size_t> groups;
  std::vector<std::pair<double, std::uint32_t>> candidates;
  std::vector<std::uint32_t> chosen;
  for (std::size_t i = 0; i < n; ++i) {
    const auto q = row(i);
    const double radius2 = tree.kth_distance_sq(q, m);
    groups.clear();
    tree.radius_search(q, radius2, groups);

    candidates.clear();
    for (std::size_t g : groups) {
      const double d2 = feature_distance_sq(q, row(members[g].front()));
      // Within a group all distances tie, so only the k+1 smallest indices can win.
      std::size_t taken = 0;
      for (std::uint32_t j : members[g]) {
        if (j == i) continue;
        candidates.emplace_back(d2, j);
        if (++taken == k) break;
      }
    }
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<long>(k), candidates.end());
    chosen.clear();
    for (std::size_t c = 0; c < k; ++c) chosen.push_back(candidates[c].second);
    std::sort(chosen.begin(), chosen.end());
    for (std::uint32_t j : chosen) edges.push_back({static_cast<std::uint32_t>(i), j});
  }
  return edges;
}

}  // namespace ugk

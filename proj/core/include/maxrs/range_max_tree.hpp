#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace maxrs {

/// Segment tree over n values (initially zero) with lazy range addition,
/// tracking both max and min per node so that the leftmost maximal run of the
/// global maximum can be found in O(log n).
class RangeMaxTree {
 public:
  explicit RangeMaxTree(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("RangeMaxTree: size must be positive");
    std::size_t cap = 1;
    while (cap < n) cap <<= 1;
    cap_ = cap;
    clear();
  }

  std::size_t size() const { return n_; }

  /// Adds `delta` to every value in [first, last] (inclusive).
  void add(std::size_t first, std::size_t last, double delta) {
    if (first > last || last >= n_) throw std::out_of_range("RangeMaxTree::add: bad range");
    add(1, 0, cap_ - 1, first, last, delta);
  }

  /// Resets every value to zero.
  void clear() {
    nodes_.assign(2 * cap_, Node{});
    for (std::size_t i = n_; i < cap_; ++i) {
      nodes_[cap_ + i].max = -std::numeric_limits<double>::infinity();
      nodes_[cap_ + i].min = std::numeric_limits<double>::infinity();
    }
    for (std::size_t node = cap_ - 1; node >= 1; --node) pull(node);
  }

  double value(std::size_t i) {
    if (i >= n_) throw std::out_of_range("RangeMaxTree::value");
    std::size_t node = 1, lo = 0, hi = cap_ - 1;
    while (lo != hi) {
      push(node);
      const std::size_t mid = lo + (hi - lo) / 2;
      if (i <= mid) {
        node = 2 * node;
        hi = mid;
      } else {
        node = 2 * node + 1;
        lo = mid + 1;
      }
    }
    return nodes_[node].max;
  }

  /// Leftmost index attaining the maximum over [0, n).
  std::size_t leftmost_max() {
    std::size_t node = 1, lo = 0, hi = cap_ - 1;
    while (lo != hi) {
      push(node);
      const std::size_t mid = lo + (hi - lo) / 2;
      const Node& l = nodes_[2 * node];
      const Node& r = nodes_[2 * node + 1];
      // Padding leaves beyond n_ are pinned at -inf, so they never win.
      if (l.max >= r.max) {
        node = 2 * node;
        hi = mid;
      } else {
        node = 2 * node + 1;
        lo = mid + 1;
      }
    }
    return lo;
  }

  /// First index >= start whose value is strictly below `bound`, or size()
  /// when there is none.
  std::size_t first_below(std::size_t start, double bound) {
    const std::size_t hit = first_below(1, 0, cap_ - 1, start, bound);
    return std::min(hit, n_);
  }

 private:
  struct Node {
    double max = 0.0;
    double min = 0.0;
    double lazy = 0.0;
  };

  void apply(std::size_t node, double delta) {
    nodes_[node].max += delta;
    nodes_[node].min += delta;
    nodes_[node].lazy += delta;
  }

  void push(std::size_t node) {
    if (nodes_[node].lazy != 0.0) {
      apply(2 * node, nodes_[node].lazy);
      apply(2 * node + 1, nodes_[node].lazy);
      nodes_[node].lazy = 0.0;
    }
  }

  void pull(std::size_t node) {
    nodes_[node].max = std::max(nodes_[2 * node].max, nodes_[2 * node + 1].max);
    nodes_[node].min = std::min(nodes_[2 * node].min, nodes_[2 * node + 1].min);
  }

  void add(std::size_t node, std::size_t lo, std::size_t hi, std::size_t first, std::size_t last, double delta) {
    if (last < lo || hi < first) return;
    if (first <= lo && hi <= last) {
      apply(node, delta);
      return;
    }
    push(node);
    const std::size_t mid = lo + (hi - lo) / 2;
    add(2 * node, lo, mid, first, last, delta);
    add(2 * node + 1, mid + 1, hi, first, last, delta);
    pull(node);
  }

  std::size_t first_below(std::size_t node, std::size_t lo, std::size_t hi, std::size_t start, double bound) {
    if (hi < start || lo >= n_ || nodes_[node].min >= bound) return cap_;
    if (lo == hi) return lo;
    push(node);
    const std::size_t mid = lo + (hi - lo) / 2;
    const std::size_t left = first_below(2 * node, lo, mid, start, bound);
    if (left != cap_) return left;
    return first_below(2 * node + 1, mid + 1, hi, start, bound);
  }

  std::size_t n_;
  std::size_t cap_ = 1;
  std::vector<Node> nodes_;
};

}  // namespace maxrs

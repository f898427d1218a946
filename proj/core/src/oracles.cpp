#include "maxrs/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace maxrs {

namespace {

std::vector<double> distinct(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::size_t index_of(const std::vector<double>& sorted, double v) {
  return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
}

}  // namespace

OracleAnswer brute_maxrs_rects(std::span<const WeightedRect> rects) {
  if (rects.empty()) return {};
  std::vector<double> xs, ys;
  for (const auto& r : rects) {
    xs.push_back(r.x1);
    xs.push_back(r.x2);
    ys.push_back(r.y1);
    ys.push_back(r.y2);
  }
  xs = distinct(std::move(xs));
  ys = distinct(std::move(ys));

  OracleAnswer best;
  bool have = false;
  std::vector<double> delta(ys.size());
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double xm = xs[i] + (xs[i + 1] - xs[i]) / 2.0;
    std::fill(delta.begin(), delta.end(), 0.0);
    for (const auto& r : rects) {
      if (r.x1 < xm && xm < r.x2) {
        delta[index_of(ys, r.y1)] += r.w;
        delta[index_of(ys, r.y2)] -= r.w;
      }
    }
    // Cell j spans (ys[j], ys[j+1]); a rectangle covers it iff it opens at or
    // below ys[j] and closes at or above ys[j+1].
    double run = 0.0;
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      run += delta[j];
      if (!have || run > best.value) {
        best.value = run;
        best.point = {xm, ys[j] + (ys[j + 1] - ys[j]) / 2.0};
        have = true;
      }
    }
  }
  return best;
}

OracleAnswer brute_maxrs(std::span<const WeightedObject> objects, double d1, double d2) {
  std::vector<WeightedRect> rects;
  rects.reserve(objects.size());
  for (const auto& o : objects) rects.push_back(rect_of_object(o, d1, d2));
  return brute_maxrs_rects(rects);
}

double circle_value(std::span<const WeightedObject> objects, Point p, double d) {
  const WeightedCircle disk{p.x, p.y, d, 0.0};
  double total = 0.0;
  for (const auto& o : objects) {
    if (covers(disk, Point{o.x, o.y})) total += o.w;
  }
  return total;
}

OracleAnswer brute_maxcrs(std::span<const WeightedObject> objects, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("brute_maxcrs: d must be positive");
  if (objects.empty()) return {};
  const double r = d / 2.0;
  const double eps = 1e-7 * d;

  OracleAnswer best;
  bool have = false;
  auto consider = [&](Point p) {
    const double v = circle_value(objects, p, d);
    if (!have || v > best.value) {
      best = {p, v};
      have = true;
    }
  };

  for (const auto& o : objects) consider({o.x, o.y});
  for (std::size_t i = 0; i < objects.size(); ++i) {
    for (std::size_t j = i + 1; j < objects.size(); ++j) {
      const double dx = objects[j].x - objects[i].x;
      const double dy = objects[j].y - objects[i].y;
      const double dist = std::hypot(dx, dy);
      if (dist == 0.0 || dist >= d) continue;
      const Point mid{objects[i].x + dx / 2.0, objects[i].y + dy / 2.0};
      const double h = std::sqrt(std::max(0.0, r * r - dist * dist / 4.0));
      // Unit normal to the center line.
      const double nx = -dy / dist;
      const double ny = dx / dist;
      for (double side : {1.0, -1.0}) {
        const double step = std::max(0.0, h - eps);
        consider({mid.x + side * nx * step, mid.y + side * ny * step});
      }
    }
  }
  return best;
}

}  // namespace maxrs

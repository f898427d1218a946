#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace maxrs::testing {

namespace {

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<double> midpoints(const std::vector<double>& v) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) out.push_back((v[i] + v[i + 1]) / 2.0);
  return out;
}

double weight_at(const std::vector<WeightedRect>& rects, double x, double y) {
  double s = 0.0;
  for (const auto& r : rects) {
    if (r.x1 < x && x < r.x2 && r.y1 < y && y < r.y2) s += r.w;
  }
  return s;
}

}  // namespace

double naive_max_weight(const std::vector<WeightedRect>& rects) {
  std::vector<double> xs, ys;
  for (const auto& r : rects) {
    xs.insert(xs.end(), {r.x1, r.x2});
    ys.insert(ys.end(), {r.y1, r.y2});
  }
  double best = 0.0;
  for (double x : midpoints(sorted_unique(xs))) {
    for (double y : midpoints(sorted_unique(ys))) best = std::max(best, weight_at(rects, x, y));
  }
  return best;
}

double naive_line_max(const std::vector<WeightedRect>& rects, double ym) {
  std::vector<double> xs;
  for (const auto& r : rects) xs.insert(xs.end(), {r.x1, r.x2});
  double best = 0.0;
  for (double x : midpoints(sorted_unique(xs))) best = std::max(best, weight_at(rects, x, ym));
  return best;
}

double grid_circle_max(const std::vector<WeightedObject>& objects, double d, int steps) {
  const double r = d / 2.0;
  const double pitch = d / steps;
  double best = 0.0;
  for (const auto& anchor : objects) {
    std::vector<const WeightedObject*> near;
    for (const auto& o : objects) {
      if (std::abs(o.x - anchor.x) < 2 * d && std::abs(o.y - anchor.y) < 2 * d) near.push_back(&o);
    }
    // Any point with positive coverage lies within r of some object, so a
    // grid over each object's bounding square suffices.
    const double gx0 = std::floor((anchor.x - r) / pitch) * pitch;
    const double gy0 = std::floor((anchor.y - r) / pitch) * pitch;
    for (int i = 0; i <= steps + 1; ++i) {
      const double x = gx0 + i * pitch;
      for (int j = 0; j <= steps + 1; ++j) {
        const double y = gy0 + j * pitch;
        double s = 0.0;
        for (const auto* o : near) {
          const double dx = o->x - x, dy = o->y - y;
          if (dx * dx + dy * dy < r * r) s += o->w;
        }
        best = std::max(best, s);
      }
    }
  }
  return best;
}

double sampled_rect_max(const std::vector<WeightedObject>& objects, double d1, double d2, int samples,
                        std::uint64_t seed) {
  if (objects.empty()) return 0.0;
  double lx = objects[0].x, hx = lx, ly = objects[0].y, hy = ly;
  for (const auto& o : objects) {
    lx = std::min(lx, o.x);
    hx = std::max(hx, o.x);
    ly = std::min(ly, o.y);
    hy = std::max(hy, o.y);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lx - d1 / 2, hx + d1 / 2), uy(ly - d2 / 2, hy + d2 / 2);
  const auto rects = to_rects(objects, d1, d2);
  double best = 0.0;
  for (int i = 0; i < samples; ++i) best = std::max(best, weight_at(rects, ux(rng), uy(rng)));
  return best;
}

std::vector<WeightedRect> to_rects(const std::vector<WeightedObject>& objects, double d1, double d2) {
  std::vector<WeightedRect> out;
  for (const auto& o : objects) out.push_back({o.x - d1 / 2, o.x + d1 / 2, o.y - d2 / 2, o.y + d2 / 2, o.w});
  return out;
}

double event_mass(const std::vector<RectEvent>& events) {
  double m = 0.0;
  for (const auto& e : events) {
    const double s = e.kind == EdgeKind::kBottom ? -1.0 : 1.0;
    m += s * e.y * (e.x2 - e.x1) * e.w;
  }
  return m;
}

double span_mass(const std::vector<SpanEvent>& spans, const SlabGrid& grid) {
  double m = 0.0;
  for (const auto& e : spans) {
    const double s = e.kind == EdgeKind::kBottom ? -1.0 : 1.0;
    m += s * e.y * (grid.bounds[e.slab_to + 1] - grid.bounds[e.slab_from]) * e.w;
  }
  return m;
}

std::vector<WeightedRect> worked_example_rects() {
  return {
      {5, 25, 3, 7, 1},    // crosses the first two boundaries
      {2, 15, 5, 8, 1},
      {12, 18, 4, 6, 1},
      {26, 34, 1, 4, 1},   // straddles x = 30
      {32, 38, 2, 6, 1},
  };
}

SlabGrid worked_example_grid() {
  SlabGrid g;
  g.bounds = {-kInf, 10, 20, 30, kInf};
  g.seamless = {true, true, true};
  return g;
}

std::vector<WeightedObject> tightness_objects() {
  return {
      {-0.9, -0.9, 1}, {0.9, -0.9, 1}, {-0.9, 0.9, 1}, {0.9, 0.9, 1},
      {9.9, 9.9, 1},   {10.1, 9.9, 1}, {9.9, 10.1, 1}, {10.1, 10.1, 1},
  };
}

std::vector<WeightedObject> random_objects(const InstanceSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, spec.extent);
  std::normal_distribution<double> gauss(spec.extent / 2, spec.extent / 8);
  std::uniform_int_distribution<int> wdist(1, 10);
  std::vector<WeightedObject> out;
  for (std::size_t i = 0; i < spec.n; ++i) {
    WeightedObject o;
    if (spec.gaussian) {
      do o.x = gauss(rng); while (o.x < 0 || o.x > spec.extent);
      do o.y = gauss(rng); while (o.y < 0 || o.y > spec.extent);
    } else {
      o.x = uni(rng);
      o.y = uni(rng);
    }
    o.w = spec.random_weights ? wdist(rng) : 1.0;
    out.push_back(o);
  }
  return out;
}

std::size_t depth_bound(std::size_t n, std::size_t m, std::size_t mem) {
  std::size_t k = 0;
  double reach = static_cast<double>(mem);
  while (reach < 2.0 * static_cast<double>(n)) {
    reach *= static_cast<double>(m);
    ++k;
  }
  return k;
}

std::size_t NaiveRangeMax::leftmost_max() const {
  return static_cast<std::size_t>(std::max_element(v_.begin(), v_.end()) - v_.begin());
}

std::size_t NaiveRangeMax::first_below(std::size_t start, double bound) const {
  for (std::size_t i = start; i < v_.size(); ++i) {
    if (v_[i] < bound) return i;
  }
  return v_.size();
}

}  // namespace maxrs::testing

#include "maxrs/approx_maxcrs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace maxrs {

SigmaRange sigma_range(double d) {
  return {(std::numbers::sqrt2 - 1.0) * d / 2.0, d / 2.0};
}

double default_sigma(double d) { return std::numbers::sqrt2 * d / 4.0; }

std::array<Point, 4> shifted_points_by_offset(Point p0, double offset) {
  return {Point{p0.x + offset, p0.y + offset}, Point{p0.x - offset, p0.y + offset},
          Point{p0.x - offset, p0.y - offset}, Point{p0.x + offset, p0.y - offset}};
}

std::array<Point, 4> shifted_points(Point p0, double sigma, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("shifted_points: d must be positive");
  const SigmaRange r = sigma_range(d);
  if (!(sigma > r.lo && sigma < r.hi)) {
    throw std::invalid_argument("shifted_points: sigma must lie in ((sqrt(2)-1)d/2, d/2)");
  }
  return shifted_points_by_offset(p0, sigma / std::numbers::sqrt2);
}

double eval_circle_value(const BlockFile<WeightedObject>& objects, Point p, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("eval_circle_value: d must be positive");
  if (!objects.valid()) return 0.0;
  const WeightedCircle disk{p.x, p.y, d, 0.0};
  double total = 0.0;
  BlockReader<WeightedObject> reader(objects);
  while (auto o = reader.next()) {
    if (covers(disk, Point{o->x, o->y})) total += o->w;
  }
  return total;
}

CrsAnswer approx_maxcrs(BlockStore& store, const BlockFile<WeightedObject>& objects, double d,
                        std::optional<double> sigma) {
  if (!(d > 0.0)) throw std::invalid_argument("approx_maxcrs: d must be positive");
  CrsAnswer ans;
  ans.sigma = sigma.value_or(default_sigma(d));
  if (sigma) shifted_points(Point{}, *sigma, d);  // validates
  if (objects.empty()) return ans;

  // The d x d bounding square of the disk around an object is exactly the
  // object's d x d rectangle.
  const MaxRSResult exact = solve_maxrs(store, objects, d, d);
  ans.region = exact.region;
  ans.sort_io = exact.sort_io;
  ans.sweep_io = exact.sweep_io;

  const Point p0 = exact.point;
  const auto shifted = sigma ? shifted_points(p0, *sigma, d) : shifted_points_by_offset(p0, d / 4.0);
  ans.candidates[0].point = p0;
  for (std::size_t i = 0; i < 4; ++i) ans.candidates[i + 1].point = shifted[i];

  const IOStats before = store.io_snapshot();
  for (auto& c : ans.candidates) c.value = eval_circle_value(objects, c.point, d);
  ans.scan_io = store.io_snapshot() - before;

  const Candidate* best = &ans.candidates[0];
  for (const auto& c : ans.candidates) {
    const bool better = c.value > best->value ||
                        (c.value == best->value &&
                         (c.point.x < best->point.x || (c.point.x == best->point.x && c.point.y < best->point.y)));
    if (better) best = &c;
  }
  ans.point = best->point;
  ans.value = best->value;
  return ans;
}

ShiftAudit audit_shifted_cover(std::span<const WeightedObject> objects, Point p0, double d, double sigma) {
  const auto shifted = shifted_points(p0, sigma, d);
  const WeightedRect square = mbr_of_circle(WeightedCircle{p0.x, p0.y, d, 1.0});
  ShiftAudit audit;
  std::array<double, 4> weights{};
  for (const auto& o : objects) {
    const Point q{o.x, o.y};
    bool hit = false;
    for (std::size_t i = 0; i < 4; ++i) {
      if (covers(WeightedCircle{shifted[i].x, shifted[i].y, d, 1.0}, q)) {
        weights[i] += o.w;
        hit = true;
      }
    }
    if (covers(square, q)) {
      ++audit.square_objects;
      audit.square_weight += o.w;
      if (!hit) ++audit.uncovered;
    }
  }
  for (double w : weights) audit.best_shifted = std::max(audit.best_shifted, w);
  audit.four_times_bound = audit.square_weight <= 4.0 * audit.best_shifted;
  return audit;
}

}  // namespace maxrs

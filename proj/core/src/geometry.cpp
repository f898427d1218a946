#include "maxrs/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace maxrs {

WeightedRect rect_of_object(const WeightedObject& o, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0) || !std::isfinite(d1) || !std::isfinite(d2)) {
    throw std::invalid_argument("rect_of_object: range extents must be positive and finite");
  }
  const double hx = d1 / 2.0;
  const double hy = d2 / 2.0;
  return {o.x - hx, o.x + hx, o.y - hy, o.y + hy, o.w};
}

WeightedRect mbr_of_circle(const WeightedCircle& c) {
  if (!(c.d > 0.0)) {
    throw std::invalid_argument("mbr_of_circle: diameter must be positive");
  }
  const double r = c.d / 2.0;
  return {c.cx - r, c.cx + r, c.cy - r, c.cy + r, c.w};
}

bool covers(const WeightedRect& r, Point p) {
  return r.x1 < p.x && p.x < r.x2 && r.y1 < p.y && p.y < r.y2;
}

bool covers(const WeightedCircle& c, Point p) {
  const double dx = p.x - c.cx;
  const double dy = p.y - c.cy;
  const double r = c.d / 2.0;
  return dx * dx + dy * dy < r * r;
}

double location_weight(std::span<const WeightedRect> rects, Point p) {
  double total = 0.0;
  for (const auto& r : rects) {
    if (covers(r, p)) total += r.w;
  }
  return total;
}

}  // namespace maxrs

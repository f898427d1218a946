#pragma once

#include <span>

namespace maxrs {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// An input object: a location with a non-negative weight.
struct WeightedObject {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;

  friend bool operator==(const WeightedObject&, const WeightedObject&) = default;
};

/// Open axis-aligned rectangle (x1, x2) x (y1, y2). Boundary points are not
/// covered.
struct WeightedRect {
  double x1 = 0.0;
  double x2 = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  double w = 0.0;

  friend bool operator==(const WeightedRect&, const WeightedRect&) = default;
};

/// Open disk of diameter `d` centered at (cx, cy).
struct WeightedCircle {
  double cx = 0.0;
  double cy = 0.0;
  double d = 0.0;
  double w = 0.0;
};

/// The d1 x d2 rectangle centered on `o`, carrying its weight. A point p lies
/// in the result iff the d1 x d2 query rectangle centered at p covers `o`.
/// Throws std::invalid_argument unless d1 > 0 and d2 > 0.
WeightedRect rect_of_object(const WeightedObject& o, double d1, double d2);

/// The d x d bounding square of an open disk.
WeightedRect mbr_of_circle(const WeightedCircle& c);

bool covers(const WeightedRect& r, Point p);
bool covers(const WeightedCircle& c, Point p);

/// Sum of the weights of all rectangles covering `p`.
double location_weight(std::span<const WeightedRect> rects, Point p);

}  // namespace maxrs

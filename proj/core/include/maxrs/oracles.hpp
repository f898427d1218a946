#pragma once

// In-memory brute-force solvers used as ground truth on small instances.

#include <span>

#include "maxrs/geometry.hpp"

namespace maxrs {

struct OracleAnswer {
  Point point;
  double value = 0.0;
};

/// Exhaustive evaluation over every open cell of the rectangle edge
/// arrangement; the answer is the midpoint of the first best cell in
/// (x, y) order. O(n^2) cells. No input yields the origin with 0.
OracleAnswer brute_maxrs(std::span<const WeightedObject> objects, double d1, double d2);
OracleAnswer brute_maxrs_rects(std::span<const WeightedRect> rects);

/// Candidate enumeration: every object location and every intersection of
/// two radius-d/2 circles, the latter nudged by 1e-7 * d toward the midpoint
/// of the two centers so it lands inside both open disks. O(n^3).
OracleAnswer brute_maxcrs(std::span<const WeightedObject> objects, double d);

/// Weight of objects strictly inside the disk of diameter d at p.
double circle_value(std::span<const WeightedObject> objects, Point p, double d);

}  // namespace maxrs

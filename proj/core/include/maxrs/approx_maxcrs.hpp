#pragma once

// Approximate maximizing circular range sum. The circles are replaced by
// their d x d bounding squares, the exact rectangle solver finds the best
// square center p0, and the answer is the best of p0 and four points shifted
// diagonally away from it.

#include <array>
#include <optional>
#include <span>

#include "maxrs/datasets.hpp"
#include "maxrs/emstore.hpp"
#include "maxrs/exact_maxrs.hpp"
#include "maxrs/geometry.hpp"

namespace maxrs {

/// Open interval of valid shifting distances for diameter d.
struct SigmaRange {
  double lo = 0.0;
  double hi = 0.0;
};

SigmaRange sigma_range(double d);

/// sqrt(2) * d / 4, the middle of the valid interval.
double default_sigma(double d);

/// p0 + (+-sigma/sqrt(2), +-sigma/sqrt(2)) in the order (+,+), (-,+), (-,-),
/// (+,-). Throws std::invalid_argument unless sigma lies strictly inside
/// sigma_range(d).
std::array<Point, 4> shifted_points(Point p0, double sigma, double d);

/// Same placement given the per-axis offset directly.
std::array<Point, 4> shifted_points_by_offset(Point p0, double offset);

/// Total weight of objects strictly inside the disk of diameter d at p.
/// One sequential scan of the file.
double eval_circle_value(const BlockFile<WeightedObject>& objects, Point p, double d);

struct Candidate {
  Point point;
  double value = 0.0;
};

struct CrsAnswer {
  Point point;
  double value = 0.0;
  /// p0 first, then the four shifted points.
  std::array<Candidate, 5> candidates{};
  MaxRegion region;
  double sigma = 0.0;
  IOStats sort_io;
  IOStats sweep_io;
  IOStats scan_io;
};

/// Runs the approximation. Without `sigma` the default is used, with exact
/// axis offsets of d/4. Ties among candidates go to the smallest x, then the
/// smallest y. An empty object file yields the origin with value 0.
CrsAnswer approx_maxcrs(BlockStore& store, const BlockFile<WeightedObject>& objects, double d,
                        std::optional<double> sigma = std::nullopt);

/// Checks the covering argument behind the approximation on one instance.
struct ShiftAudit {
  std::size_t square_objects = 0;  // objects in the open d x d square at p0
  std::size_t uncovered = 0;       // of those, how many no shifted disk covers
  double square_weight = 0.0;
  double best_shifted = 0.0;
  bool four_times_bound = true;    // square_weight <= 4 * best_shifted
};

ShiftAudit audit_shifted_cover(std::span<const WeightedObject> objects, Point p0, double d, double sigma);

}  // namespace maxrs

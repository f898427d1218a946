#pragma once

// Test-side oracles and fixtures. Nothing here calls into the solvers under
// test except for the plain geometry predicates.

#include <cstdint>
#include <random>
#include <vector>

#include "maxrs/exact_maxrs.hpp"
#include "maxrs/geometry.hpp"

namespace maxrs::testing {

/// Max location-weight by direct evaluation at every midpoint of the edge
/// arrangement. O(n^3); meant for n up to a few dozen.
double naive_max_weight(const std::vector<WeightedRect>& rects);

/// Max location-weight restricted to the horizontal line y = ym.
double naive_line_max(const std::vector<WeightedRect>& rects, double ym);

/// Max coverage found on a square grid of pitch d/steps laid over every
/// object's neighbourhood. A lower bound on the true optimum.
double grid_circle_max(const std::vector<WeightedObject>& objects, double d, int steps = 200);

/// Best coverage among `samples` uniform points in the objects' bounding box
/// (expanded by half the query size). A lower bound on the optimum.
double sampled_rect_max(const std::vector<WeightedObject>& objects, double d1, double d2, int samples,
                        std::uint64_t seed);

std::vector<WeightedRect> to_rects(const std::vector<WeightedObject>& objects, double d1, double d2);

/// Signed area x weight carried by a set of events: -y*len*w for bottoms,
/// +y*len*w for tops, which sums to the enclosed mass over matched pairs.
double event_mass(const std::vector<RectEvent>& events);
double span_mass(const std::vector<SpanEvent>& spans, const SlabGrid& grid);

/// Five unit rectangles on the grid x = 10, 20, 30 with h-lines y = 1..8.
std::vector<WeightedRect> worked_example_rects();
SlabGrid worked_example_grid();

/// Two clusters of four unit objects, diameter 2. The lower cluster's square
/// optimum has a centre outside every disk; the upper cluster shares one
/// point among all four disks.
std::vector<WeightedObject> tightness_objects();
inline constexpr double kTightnessDiameter = 2.0;

/// Random objects drawn from std::mt19937_64 with the standard distributions.
struct InstanceSpec {
  std::size_t n = 0;
  double extent = 100.0;
  bool gaussian = false;
  bool random_weights = false;
};
std::vector<WeightedObject> random_objects(const InstanceSpec& spec, std::mt19937_64& rng);

/// Smallest k >= 0 with m^k * M >= 2N.
std::size_t depth_bound(std::size_t n, std::size_t m, std::size_t mem);

/// Reference array for range-add / max queries.
class NaiveRangeMax {
 public:
  explicit NaiveRangeMax(std::size_t n) : v_(n, 0.0) {}
  void add(std::size_t first, std::size_t last, double delta) {
    for (std::size_t i = first; i <= last; ++i) v_[i] += delta;
  }
  double value(std::size_t i) const { return v_[i]; }
  std::size_t leftmost_max() const;
  std::size_t first_below(std::size_t start, double bound) const;

 private:
  std::vector<double> v_;
};

}  // namespace maxrs::testing

#pragma once

// Distribution-sweep solver for the maximizing range sum problem.
//
// Each object becomes an open d1 x d2 rectangle centered on it; the best
// query center is any point of maximum location-weight over those
// rectangles. The plane is split recursively into vertical slabs until a
// slab's events fit in memory, each slab is solved by an in-memory sweep that
// yields its slab-file (one max-interval tuple per h-line), and sibling
// slab-files are merged bottom-up together with the rectangle pieces that
// span whole child slabs.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "maxrs/datasets.hpp"
#include "maxrs/emstore.hpp"
#include "maxrs/geometry.hpp"

namespace maxrs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class EdgeKind : std::uint8_t { kBottom = 0, kTop = 1 };

/// Horizontal edge of a (possibly cropped) rectangle piece.
struct RectEvent {
  double y = 0.0;
  EdgeKind kind = EdgeKind::kBottom;
  double x1 = 0.0;
  double x2 = 0.0;
  double w = 0.0;

  friend bool operator==(const RectEvent&, const RectEvent&) = default;
};

/// An original vertical rectangle edge.
struct EdgeRecord {
  double x = 0.0;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

/// Horizontal edge of a piece that covers child slabs [slab_from, slab_to]
/// completely.
struct SpanEvent {
  double y = 0.0;
  EdgeKind kind = EdgeKind::kBottom;
  std::uint32_t slab_from = 0;
  std::uint32_t slab_to = 0;
  double w = 0.0;

  friend bool operator==(const SpanEvent&, const SpanEvent&) = default;
};

/// Max-interval <y, [x1, x2], sum>: on the strip from y up to the next tuple's
/// y, every point of (x1, x2) has location-weight `sum`, the slab maximum.
struct SlabTuple {
  double y = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double sum = 0.0;

  friend bool operator==(const SlabTuple&, const SlabTuple&) = default;
};

struct Slab {
  double lo = -kInf;
  double hi = kInf;
};

struct MaxRegion {
  double x1 = 0.0;
  double x2 = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  double sum = 0.0;
};

template <>
struct RecordTraits<RectEvent> {
  static constexpr std::size_t size = 40;
  static void encode(const RectEvent& e, std::byte* p) {
    le::put_f64(p, e.y);
    p[8] = static_cast<std::byte>(e.kind);
    std::fill(p + 9, p + 16, std::byte{0});
    le::put_f64(p + 16, e.x1);
    le::put_f64(p + 24, e.x2);
    le::put_f64(p + 32, e.w);
  }
  static RectEvent decode(const std::byte* p) {
    return {le::get_f64(p), static_cast<EdgeKind>(p[8]), le::get_f64(p + 16), le::get_f64(p + 24),
            le::get_f64(p + 32)};
  }
};

template <>
struct RecordTraits<EdgeRecord> {
  static constexpr std::size_t size = 8;
  static void encode(const EdgeRecord& e, std::byte* p) { le::put_f64(p, e.x); }
  static EdgeRecord decode(const std::byte* p) { return {le::get_f64(p)}; }
};

template <>
struct RecordTraits<SpanEvent> {
  static constexpr std::size_t size = 32;
  static void encode(const SpanEvent& e, std::byte* p) {
    le::put_f64(p, e.y);
    p[8] = static_cast<std::byte>(e.kind);
    std::fill(p + 9, p + 12, std::byte{0});
    le::put_u32(p + 12, e.slab_from);
    le::put_u32(p + 16, e.slab_to);
    std::fill(p + 20, p + 24, std::byte{0});
    le::put_f64(p + 24, e.w);
  }
  static SpanEvent decode(const std::byte* p) {
    return {le::get_f64(p), static_cast<EdgeKind>(p[8]), le::get_u32(p + 12), le::get_u32(p + 16),
            le::get_f64(p + 24)};
  }
};

template <>
struct RecordTraits<SlabTuple> {
  static constexpr std::size_t size = 32;
  static void encode(const SlabTuple& t, std::byte* p) {
    le::put_f64(p, t.y);
    le::put_f64(p + 8, t.x1);
    le::put_f64(p + 16, t.x2);
    le::put_f64(p + 24, t.sum);
  }
  static SlabTuple decode(const std::byte* p) {
    return {le::get_f64(p), le::get_f64(p + 8), le::get_f64(p + 16), le::get_f64(p + 24)};
  }
};

using SlabFile = BlockFile<SlabTuple>;

/// A sub-problem: its y-sorted events and x-sorted original edges.
struct SweepInputs {
  BlockFile<RectEvent> events;
  BlockFile<EdgeRecord> edges;
};

/// Transforms objects to rectangles and produces the sorted event and edge
/// files. All I/O, including both external sorts, goes through the store.
SweepInputs build_inputs(BlockStore& store, const BlockFile<WeightedObject>& objects, double d1, double d2);

/// Same as build_inputs for an explicit rectangle set.
SweepInputs build_rect_inputs(BlockStore& store, std::span<const WeightedRect> rects);

/// Partition of a slab into consecutive child slabs [bounds[i], bounds[i+1]).
/// `seamless[i]` is true when the boundary between child i and i+1 carries no
/// original vertical edge, which makes max-intervals touching it mergeable.
struct SlabGrid {
  std::vector<double> bounds;
  std::vector<bool> seamless;

  std::size_t size() const { return bounds.empty() ? 0 : bounds.size() - 1; }
  Slab slab(std::size_t i) const { return {bounds[i], bounds[i + 1]}; }
  Slab whole() const { return {bounds.front(), bounds.back()}; }
  /// Throws std::invalid_argument unless bounds strictly increase.
  void validate() const;
};

/// Picks up to `fanout` child slabs with roughly equal numbers of original
/// edges. One sequential pass over the edge file.
SlabGrid choose_slabs(const BlockFile<EdgeRecord>& edges, Slab slab, std::size_t fanout);

struct Division {
  SlabGrid grid;
  std::vector<SweepInputs> children;
  BlockFile<SpanEvent> spanning;
};

/// Routes a sub-problem's events and edges into the child slabs of `grid`,
/// splitting off pieces that span whole children into the y-sorted spanning
/// file.
Division divide_with_grid(BlockStore& store, const SweepInputs& node, SlabGrid grid);

/// choose_slabs followed by divide_with_grid, using the store's fanout.
Division divide(BlockStore& store, const SweepInputs& node, Slab slab);

/// In-memory sweep over y-sorted events inside `slab`. Emits one tuple per
/// distinct event y, after applying every event at that y. Throws
/// std::logic_error on unsorted input or pieces outside the slab.
void plane_sweep(std::span<const RectEvent> events, Slab slab, const std::function<void(const SlabTuple&)>& emit);
std::vector<SlabTuple> plane_sweep(std::span<const RectEvent> events, Slab slab);

/// Merges child slab-files and the spanning file into the slab-file of the
/// union slab. Holds one block per input stream plus one output block.
SlabFile merge_sweep(BlockStore& store, std::span<const SlabFile> children, const BlockFile<SpanEvent>& spanning,
                     const SlabGrid& grid);

struct RecursionStats {
  std::size_t depth = 0;  // divide levels on the deepest path
  std::size_t nodes = 0;
  std::size_t base_cases = 0;
  std::size_t max_fanout = 0;
  /// Largest observed tuples / (2K) over all nodes, K = rectangles at the node.
  double worst_tuple_ratio = 0.0;
};

/// Solves a sub-problem: in memory when its event count is at most M,
/// otherwise by divide, recursion, and merge. Consumes `inputs`.
SlabFile exact_maxrs(BlockStore& store, SweepInputs inputs, Slab slab = {}, RecursionStats* stats = nullptr);

/// The highest-sum tuple (earliest y wins ties) and its strip up to the next
/// tuple, plus the region's center. A region with sum 0 yields the origin.
/// Throws std::invalid_argument on an empty slab-file.
std::pair<MaxRegion, Point> extract_max_region(const SlabFile& slab_file);

struct MaxRSResult {
  MaxRegion region;
  Point point;
  IOStats sort_io;
  IOStats sweep_io;
  RecursionStats stats;
  std::size_t memory_high_water = 0;
};

/// End to end: build inputs, run the recursion, extract the region.
MaxRSResult solve_maxrs(BlockStore& store, const BlockFile<WeightedObject>& objects, double d1, double d2);
MaxRSResult solve_maxrs_rects(BlockStore& store, std::span<const WeightedRect> rects);

}  // namespace maxrs

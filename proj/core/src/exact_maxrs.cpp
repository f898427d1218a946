#include "maxrs/exact_maxrs.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "maxrs/range_max_tree.hpp"

namespace maxrs {

namespace {

bool event_less(const RectEvent& a, const RectEvent& b) { return a.y < b.y; }
bool edge_less(const EdgeRecord& a, const EdgeRecord& b) { return a.x < b.x; }

void push_rect(BlockWriter<RectEvent>& events, BlockWriter<EdgeRecord>& edges, const WeightedRect& r) {
  if (!(r.x1 < r.x2) || !(r.y1 < r.y2) || !std::isfinite(r.x1) || !std::isfinite(r.x2) || !std::isfinite(r.y1) ||
      !std::isfinite(r.y2)) {
    throw std::invalid_argument("rectangle must be finite with positive width and height");
  }
  if (!(r.w >= 0.0) || !std::isfinite(r.w)) throw std::invalid_argument("rectangle weight must be finite and >= 0");
  events.append({r.y1, EdgeKind::kBottom, r.x1, r.x2, r.w});
  events.append({r.y2, EdgeKind::kTop, r.x1, r.x2, r.w});
  edges.append({r.x1});
  edges.append({r.x2});
}

SweepInputs sort_inputs(BlockWriter<RectEvent>& events, BlockWriter<EdgeRecord>& edges) {
  auto raw_events = events.close();
  auto raw_edges = edges.close();
  SweepInputs out;
  out.events = external_sort(raw_events, event_less);
  out.edges = external_sort(raw_edges, edge_less);
  return out;
}

double midpoint(double a, double b) {
  double m = a + (b - a) / 2.0;
  if (!std::isfinite(m)) m = a / 2.0 + b / 2.0;
  return m;
}

// Index of the child slab containing x under half-open routing.
std::size_t child_of(const SlabGrid& grid, double x) {
  const auto first = grid.bounds.begin() + 1;
  const auto last = grid.bounds.end() - 1;
  return static_cast<std::size_t>(std::upper_bound(first, last, x) - first);
}

// Index of the child slab whose interior reaches x from the left.
std::size_t child_ending_at(const SlabGrid& grid, double x) {
  const auto first = grid.bounds.begin() + 1;
  const auto last = grid.bounds.end() - 1;
  return static_cast<std::size_t>(std::lower_bound(first, last, x) - first);
}

void record_node(RecursionStats& stats, std::size_t tuples, std::size_t events) {
  if (tuples > events) {
    throw std::logic_error("slab-file has " + std::to_string(tuples) + " tuples for " + std::to_string(events / 2) +
                           " rectangles");
  }
  if (events > 0) stats.worst_tuple_ratio = std::max(stats.worst_tuple_ratio, double(tuples) / double(events));
}

SlabFile solve_node(BlockStore& store, SweepInputs inputs, Slab slab, std::size_t depth, RecursionStats& stats) {
  ++stats.nodes;
  stats.depth = std::max(stats.depth, depth);
  const std::size_t events = inputs.events.size();

  if (events <= store.config().memory_records) {
    ++stats.base_cases;
    MemoryLease lease(store.memory(), events);
    std::vector<RectEvent> loaded;
    loaded.reserve(events);
    for (std::size_t b = 0; b < inputs.events.block_count(); ++b) {
      auto blk = read_block(inputs.events, b);
      loaded.insert(loaded.end(), blk.begin(), blk.end());
    }
    inputs = SweepInputs{};
    BlockWriter<SlabTuple> out(store);
    plane_sweep(loaded, slab, [&](const SlabTuple& t) { out.append(t); });
    SlabFile result = out.close();
    record_node(stats, result.size(), events);
    return result;
  }

  Division division = divide(store, inputs, slab);
  inputs = SweepInputs{};
  if (division.grid.size() < 2) throw std::logic_error("slab cannot be divided further");
  stats.max_fanout = std::max(stats.max_fanout, division.grid.size());

  std::vector<SlabFile> child_files;
  child_files.reserve(division.grid.size());
  for (std::size_t i = 0; i < division.grid.size(); ++i) {
    child_files.push_back(
        solve_node(store, std::move(division.children[i]), division.grid.slab(i), depth + 1, stats));
  }
  division.children.clear();

  SlabFile merged = merge_sweep(store, child_files, division.spanning, division.grid);
  record_node(stats, merged.size(), events);
  return merged;
}

}  // namespace

SweepInputs build_inputs(BlockStore& store, const BlockFile<WeightedObject>& objects, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw std::invalid_argument("build_inputs: d1 and d2 must be positive");
  BlockWriter<RectEvent> events(store);
  BlockWriter<EdgeRecord> edges(store);
  if (objects.valid()) {
    BlockReader<WeightedObject> reader(objects);
    while (auto o = reader.next()) push_rect(events, edges, rect_of_object(*o, d1, d2));
  }
  return sort_inputs(events, edges);
}

SweepInputs build_rect_inputs(BlockStore& store, std::span<const WeightedRect> rects) {
  BlockWriter<RectEvent> events(store);
  BlockWriter<EdgeRecord> edges(store);
  for (const auto& r : rects) push_rect(events, edges, r);
  return sort_inputs(events, edges);
}

void SlabGrid::validate() const {
  if (bounds.size() < 2) throw std::invalid_argument("SlabGrid: needs at least one slab");
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    if (!(bounds[i] < bounds[i + 1])) throw std::invalid_argument("SlabGrid: bounds must strictly increase");
  }
  if (seamless.size() != size() - 1) throw std::invalid_argument("SlabGrid: one seam flag per interior boundary");
}

SlabGrid choose_slabs(const BlockFile<EdgeRecord>& edges, Slab slab, std::size_t fanout) {
  if (fanout < 2) throw std::invalid_argument("choose_slabs: fanout must be at least 2");
  SlabGrid grid;
  grid.bounds.push_back(slab.lo);
  const std::size_t count = edges.size();
  if (count == 0) {
    grid.bounds.push_back(slab.hi);
    return grid;
  }

  struct Change {
    std::size_t index;
    double below;
    double above;
  };
  MemoryLease lease(edges.store().memory(), fanout);
  std::vector<Change> picks;
  std::optional<Change> last_change;
  std::size_t target = 1;
  auto rank = [&](std::size_t i) { return (count * i + fanout - 1) / fanout; };

  BlockReader<EdgeRecord> reader(edges);
  std::size_t index = 0;
  double first = 0.0;
  double prev = 0.0;
  while (auto e = reader.next()) {
    if (index == 0) {
      first = e->x;
    } else if (e->x < prev) {
      throw std::logic_error("choose_slabs: edges are not sorted by x");
    } else if (e->x > prev) {
      const Change c{index, prev, e->x};
      last_change = c;
      bool taken = false;
      while (target < fanout && rank(target) <= index) {
        if (!taken) picks.push_back(c);
        taken = true;
        ++target;
      }
    }
    prev = e->x;
    ++index;
  }
  // Targets past the final value change fall back to that change.
  if (target < fanout && last_change && (picks.empty() || picks.back().index != last_change->index)) {
    picks.push_back(*last_change);
  }

  if (picks.empty()) {
    // Every edge shares one x: split exactly there so that all pieces span.
    if (slab.lo < first && first < slab.hi) {
      grid.bounds.push_back(first);
      grid.seamless.push_back(false);
    }
  } else {
    for (const auto& c : picks) {
      const double mid = midpoint(c.below, c.above);
      if (c.below < mid && mid < c.above) {
        grid.bounds.push_back(mid);
        grid.seamless.push_back(true);
      } else {
        grid.bounds.push_back(c.above);
        grid.seamless.push_back(false);
      }
    }
  }
  grid.bounds.push_back(slab.hi);
  return grid;
}

Division divide_with_grid(BlockStore& store, const SweepInputs& node, SlabGrid grid) {
  grid.validate();
  const std::size_t k = grid.size();
  MemoryLease lease(store.memory(), k);
  Division div;
  div.children.resize(k);

  // Edges are x-sorted, so children receive contiguous runs and only one
  // output buffer is open at a time. Edges sitting on a child's left bound
  // cannot lie strictly inside it and are dropped.
  {
    std::optional<BlockWriter<EdgeRecord>> writer;
    writer.emplace(store);
    std::size_t current = 0;
    if (node.edges.valid()) {
      BlockReader<EdgeRecord> reader(node.edges);
      while (auto e = reader.next()) {
        if (e->x < grid.bounds.front() || e->x >= grid.bounds.back()) {
          throw std::logic_error("divide: edge outside the slab");
        }
        const std::size_t j = child_of(grid, e->x);
        while (current < j) {
          div.children[current++].edges = writer->close();
          writer.emplace(store);
        }
        if (e->x == grid.bounds[j]) continue;
        writer->append(*e);
      }
    }
    while (current < k) {
      div.children[current++].edges = writer->close();
      if (current < k) writer.emplace(store);
    }
  }

  std::vector<BlockWriter<RectEvent>> outputs;
  outputs.reserve(k);
  for (std::size_t i = 0; i < k; ++i) outputs.emplace_back(store);
  BlockWriter<SpanEvent> spans(store);
  if (node.events.valid()) {
    BlockReader<RectEvent> reader(node.events);
    while (auto e = reader.next()) {
      if (!(e->x1 < e->x2) || e->x1 < grid.bounds.front() || e->x2 > grid.bounds.back()) {
        throw std::logic_error("divide: event outside the slab");
      }
      const std::size_t jf = child_of(grid, e->x1);
      const std::size_t jl = child_ending_at(grid, e->x2);
      const bool first_spans = e->x1 <= grid.bounds[jf] && e->x2 >= grid.bounds[jf + 1];
      const bool last_spans = e->x1 <= grid.bounds[jl] && e->x2 >= grid.bounds[jl + 1];
      if (jf == jl) {
        if (first_spans) {
          spans.append({e->y, e->kind, static_cast<std::uint32_t>(jf), static_cast<std::uint32_t>(jf), e->w});
        } else {
          outputs[jf].append(*e);
        }
        continue;
      }
      const std::size_t from = first_spans ? jf : jf + 1;
      const std::size_t to = last_spans ? jl : jl - 1;
      if (!first_spans) outputs[jf].append({e->y, e->kind, e->x1, grid.bounds[jf + 1], e->w});
      if (from <= to) {
        spans.append({e->y, e->kind, static_cast<std::uint32_t>(from), static_cast<std::uint32_t>(to), e->w});
      }
      if (!last_spans) outputs[jl].append({e->y, e->kind, grid.bounds[jl], e->x2, e->w});
    }
  }
  for (std::size_t i = 0; i < k; ++i) div.children[i].events = outputs[i].close();
  div.spanning = spans.close();
  div.grid = std::move(grid);
  return div;
}

Division divide(BlockStore& store, const SweepInputs& node, Slab slab) {
  return divide_with_grid(store, node, choose_slabs(node.edges, slab, store.fanout()));
}

void plane_sweep(std::span<const RectEvent> events, Slab slab, const std::function<void(const SlabTuple&)>& emit) {
  if (events.empty()) return;

  std::vector<double> coords;
  coords.reserve(2 * events.size() + 2);
  coords.push_back(slab.lo);
  coords.push_back(slab.hi);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (i > 0 && e.y < events[i - 1].y) throw std::logic_error("plane_sweep: events are not sorted by y");
    if (!(e.x1 < e.x2) || e.x1 < slab.lo || e.x2 > slab.hi) {
      throw std::logic_error("plane_sweep: event x-range outside the slab");
    }
    coords.push_back(e.x1);
    coords.push_back(e.x2);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

  // Elements alternate open interval, coordinate point, open interval, ...:
  // interval j = (coords[j], coords[j+1]) sits at 2j, the point coords[j] at
  // 2j - 1. Tracking points keeps every reported run free of zero-width gaps.
  const std::size_t intervals = coords.size() - 1;
  RangeMaxTree tree(2 * intervals - 1);
  auto slot = [&](double x) {
    return static_cast<std::size_t>(std::lower_bound(coords.begin(), coords.end(), x) - coords.begin());
  };

  long long active = 0;
  std::size_t i = 0;
  while (i < events.size()) {
    const double y = events[i].y;
    for (; i < events.size() && events[i].y == y; ++i) {
      const auto& e = events[i];
      const std::size_t a = slot(e.x1);
      const std::size_t b = slot(e.x2);
      const bool bottom = e.kind == EdgeKind::kBottom;
      tree.add(2 * a, 2 * (b - 1), bottom ? e.w : -e.w);
      active += bottom ? 1 : -1;
    }
    if (active == 0) tree.clear();

    std::size_t first = tree.leftmost_max();
    const double best = tree.value(first);
    std::size_t last = tree.first_below(first, best) - 1;
    // With exact sums runs start and end on intervals; rounding in
    // fractional weights can leave a lone point on top.
    if (first % 2 == 1) ++first;
    if (last % 2 == 1) --last;
    if (last < first || last >= tree.size()) last = first;
    emit({y, coords[first / 2], coords[last / 2 + 1], best});
  }
}

std::vector<SlabTuple> plane_sweep(std::span<const RectEvent> events, Slab slab) {
  std::vector<SlabTuple> out;
  plane_sweep(events, slab, [&](const SlabTuple& t) { out.push_back(t); });
  return out;
}

SlabFile merge_sweep(BlockStore& store, std::span<const SlabFile> children, const BlockFile<SpanEvent>& spanning,
                     const SlabGrid& grid) {
  grid.validate();
  const std::size_t k = grid.size();
  if (children.size() != k) throw std::invalid_argument("merge_sweep: one slab-file per child slab required");

  MemoryLease lease(store.memory(), k);
  std::vector<BlockReader<SlabTuple>> readers;
  readers.reserve(k);
  for (const auto& f : children) readers.emplace_back(f);
  std::optional<BlockReader<SpanEvent>> span_reader;
  if (spanning.valid()) span_reader.emplace(spanning);

  // Per child: the active max-interval with its own sum, and the weight of
  // spanning pieces currently cut by the sweep line.
  std::vector<SlabTuple> base(k);
  std::vector<bool> started(k, false);
  std::vector<double> up(k, 0.0);
  std::vector<long long> covering(k, 0);
  for (std::size_t i = 0; i < k; ++i) base[i] = {-kInf, grid.bounds[i], grid.bounds[i + 1], 0.0};
  std::vector<double> eff(k, 0.0);

  BlockWriter<SlabTuple> out(store);
  double last_span_y = -kInf;
  for (;;) {
    bool any = false;
    double y = kInf;
    for (const auto& r : readers) {
      if (const auto* t = r.peek()) {
        y = any ? std::min(y, t->y) : t->y;
        any = true;
      }
    }
    if (span_reader) {
      if (const auto* s = span_reader->peek()) {
        y = any ? std::min(y, s->y) : s->y;
        any = true;
      }
    }
    if (!any) break;

    while (span_reader && span_reader->peek() != nullptr && span_reader->peek()->y == y) {
      const SpanEvent s = *span_reader->next();
      if (s.y < last_span_y) throw std::logic_error("merge_sweep: spanning events are not sorted by y");
      last_span_y = s.y;
      if (s.slab_from > s.slab_to || s.slab_to >= k) throw std::logic_error("merge_sweep: bad spanning slab range");
      const bool bottom = s.kind == EdgeKind::kBottom;
      for (std::size_t j = s.slab_from; j <= s.slab_to; ++j) {
        up[j] += bottom ? s.w : -s.w;
        covering[j] += bottom ? 1 : -1;
        if (covering[j] == 0) up[j] = 0.0;
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      const auto* t = readers[i].peek();
      if (t == nullptr || t->y != y) continue;
      const SlabTuple next = *readers[i].next();
      if (started[i] && !(next.y > base[i].y)) throw std::logic_error("merge_sweep: slab-file y values must increase");
      if (!(next.x1 < next.x2) || next.x1 < grid.bounds[i] || next.x2 > grid.bounds[i + 1]) {
        throw std::logic_error("merge_sweep: max-interval overlaps another slab");
      }
      base[i] = next;
      started[i] = true;
    }

    double best = -kInf;
    for (std::size_t i = 0; i < k; ++i) {
      eff[i] = base[i].sum + up[i];
      best = std::max(best, eff[i]);
    }
    // Leftmost child at the maximum, extended through seamless neighbours
    // whose max-intervals continue across the shared bound.
    std::size_t i = 0;
    while (eff[i] != best) ++i;
    double x1 = base[i].x1;
    double x2 = base[i].x2;
    while (i + 1 < k && x2 == grid.bounds[i + 1] && grid.seamless[i] && eff[i + 1] == best &&
           base[i + 1].x1 == grid.bounds[i + 1]) {
      ++i;
      x2 = base[i].x2;
    }
    out.append({y, x1, x2, best});
  }
  return out.close();
}

SlabFile exact_maxrs(BlockStore& store, SweepInputs inputs, Slab slab, RecursionStats* stats) {
  RecursionStats local;
  RecursionStats& s = stats != nullptr ? *stats : local;
  return solve_node(store, std::move(inputs), slab, 0, s);
}

std::pair<MaxRegion, Point> extract_max_region(const SlabFile& slab_file) {
  if (slab_file.empty()) throw std::invalid_argument("extract_max_region: empty slab-file");
  BlockReader<SlabTuple> reader(slab_file);
  SlabTuple best{};
  bool have = false;
  bool pending = false;
  double next_y = kInf;
  while (auto t = reader.next()) {
    if (pending) {
      // Consecutive strips with the same interval and sum belong to one region.
      if (t->x1 == best.x1 && t->x2 == best.x2 && t->sum == best.sum) continue;
      next_y = t->y;
      pending = false;
    }
    if (!have || t->sum > best.sum) {
      best = *t;
      have = true;
      pending = true;
      next_y = kInf;
    }
  }
  MaxRegion region{best.x1, best.x2, best.y, next_y, best.sum};
  if (!(best.sum > 0.0)) return {region, Point{0.0, 0.0}};
  if (!std::isfinite(best.x1) || !std::isfinite(best.x2) || !std::isfinite(best.y) || !std::isfinite(next_y)) {
    throw std::logic_error("extract_max_region: unbounded region with positive sum");
  }
  return {region, Point{midpoint(best.x1, best.x2), midpoint(best.y, next_y)}};
}

namespace {

MaxRSResult finish(BlockStore& store, SweepInputs inputs, IOStats start) {
  MaxRSResult res;
  const IOStats sorted = store.io_snapshot();
  res.sort_io = sorted - start;
  if (inputs.events.empty()) {
    res.memory_high_water = store.memory().high_water();
    return res;
  }
  SlabFile file = exact_maxrs(store, std::move(inputs), Slab{}, &res.stats);
  auto [region, point] = extract_max_region(file);
  res.region = region;
  res.point = point;
  res.sweep_io = store.io_snapshot() - sorted;
  res.memory_high_water = store.memory().high_water();
  return res;
}

}  // namespace

MaxRSResult solve_maxrs(BlockStore& store, const BlockFile<WeightedObject>& objects, double d1, double d2) {
  store.memory().reset_high_water();
  const IOStats start = store.io_snapshot();
  return finish(store, build_inputs(store, objects, d1, d2), start);
}

MaxRSResult solve_maxrs_rects(BlockStore& store, std::span<const WeightedRect> rects) {
  store.memory().reset_high_water();
  const IOStats start = store.io_snapshot();
  return finish(store, build_rect_inputs(store, rects), start);
}

}  // namespace maxrs

#pragma once

// Simulated external memory. Every transfer between "disk" and memory goes
// through BlockStore in whole blocks of B records and is counted; buffers and
// in-memory working sets are charged against a MemoryTracker.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maxrs {

/// External-memory model parameters, all measured in records.
struct EMConfig {
  std::size_t block_records = 8;     // B
  std::size_t memory_records = 128;  // M
  std::size_t fanout = 0;            // m; 0 derives max(2, M/B - 2)

  /// Throws std::invalid_argument on B < 1, M < 2B, or an out-of-range fanout.
  void validate() const;
  std::size_t effective_fanout() const;
  /// Upper bound on tracked memory: M records plus (m + 2) block buffers.
  std::size_t memory_ceiling() const;
};

struct IOStats {
  std::uint64_t blocks_read = 0;
  std::uint64_t blocks_written = 0;

  std::uint64_t total() const { return blocks_read + blocks_written; }

  friend bool operator==(const IOStats&, const IOStats&) = default;
  friend IOStats operator-(const IOStats& a, const IOStats& b) {
    return {a.blocks_read - b.blocks_read, a.blocks_written - b.blocks_written};
  }
  friend IOStats operator+(const IOStats& a, const IOStats& b) {
    return {a.blocks_read + b.blocks_read, a.blocks_written + b.blocks_written};
  }
};

/// Records-in-memory accounting with a high-water mark. Acquiring past the
/// limit throws std::length_error.
class MemoryTracker {
 public:
  explicit MemoryTracker(std::size_t limit) : limit_(limit) {}

  void acquire(std::size_t records);
  void release(std::size_t records) noexcept;

  std::size_t current() const { return current_; }
  std::size_t high_water() const { return high_water_; }
  std::size_t limit() const { return limit_; }
  void reset_high_water() { high_water_ = current_; }

 private:
  std::size_t limit_;
  std::size_t current_ = 0;
  std::size_t high_water_ = 0;
};

class MemoryLease {
 public:
  MemoryLease() = default;
  MemoryLease(MemoryTracker& tracker, std::size_t records) : tracker_(&tracker), records_(records) {
    tracker.acquire(records);
  }
  MemoryLease(MemoryLease&& other) noexcept
      : tracker_(std::exchange(other.tracker_, nullptr)), records_(std::exchange(other.records_, 0)) {}
  MemoryLease& operator=(MemoryLease&& other) noexcept {
    if (this != &other) {
      reset();
      tracker_ = std::exchange(other.tracker_, nullptr);
      records_ = std::exchange(other.records_, 0);
    }
    return *this;
  }
  MemoryLease(const MemoryLease&) = delete;
  MemoryLease& operator=(const MemoryLease&) = delete;
  ~MemoryLease() { reset(); }

  void reset() noexcept {
    if (tracker_ != nullptr) tracker_->release(records_);
    tracker_ = nullptr;
    records_ = 0;
  }

 private:
  MemoryTracker* tracker_ = nullptr;
  std::size_t records_ = 0;
};

using FileId = std::uint64_t;

/// Raw byte-addressed backing for simulated files. Not counted; only
/// BlockStore talks to it.
class Storage {
 public:
  virtual ~Storage() = default;
  virtual FileId create() = 0;
  virtual void remove(FileId id) noexcept = 0;
  virtual void append(FileId id, std::span<const std::byte> bytes) = 0;
  virtual void read(FileId id, std::uint64_t offset, std::span<std::byte> out) = 0;
  virtual std::uint64_t size(FileId id) const = 0;
};

std::unique_ptr<Storage> make_memory_storage();
/// Files live as `blk_<id>.dat` under `dir`, which must exist.
std::unique_ptr<Storage> make_directory_storage(const std::filesystem::path& dir);

class BlockStore {
 public:
  explicit BlockStore(EMConfig config, std::unique_ptr<Storage> storage = make_memory_storage());
  BlockStore(const BlockStore&) = delete;
  BlockStore& operator=(const BlockStore&) = delete;

  const EMConfig& config() const { return config_; }
  std::size_t block_records() const { return config_.block_records; }
  std::size_t fanout() const { return fanout_; }

  IOStats io_snapshot() const { return io_; }
  MemoryTracker& memory() { return memory_; }
  const MemoryTracker& memory() const { return memory_; }
  std::size_t live_files() const { return live_files_; }

  FileId create_file();
  void remove_file(FileId id) noexcept;
  /// Appends one block; counts one write.
  void write_block(FileId id, std::span<const std::byte> bytes);
  /// Reads `out.size()` bytes at `offset`; counts one read.
  void read_block(FileId id, std::uint64_t offset, std::span<std::byte> out);

 private:
  EMConfig config_;
  std::size_t fanout_;
  std::unique_ptr<Storage> storage_;
  MemoryTracker memory_;
  IOStats io_;
  std::size_t live_files_ = 0;
};

/// Fixed-size little-endian record layout. Specialize with
///   static constexpr std::size_t size;
///   static void encode(const T&, std::byte*);
///   static T decode(const std::byte*);
template <class T>
struct RecordTraits;

namespace le {

inline void put_u64(std::byte* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::byte>((v >> (8 * i)) & 0xffU);
}
inline std::uint64_t get_u64(const std::byte* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}
inline void put_u32(std::byte* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::byte>((v >> (8 * i)) & 0xffU);
}
inline std::uint32_t get_u32(const std::byte* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}
inline void put_u16(std::byte* p, std::uint16_t v) {
  p[0] = static_cast<std::byte>(v & 0xffU);
  p[1] = static_cast<std::byte>(v >> 8);
}
inline std::uint16_t get_u16(const std::byte* p) {
  return static_cast<std::uint16_t>(static_cast<unsigned>(p[0]) | (static_cast<unsigned>(p[1]) << 8));
}
inline void put_f64(std::byte* p, double v) { put_u64(p, std::bit_cast<std::uint64_t>(v)); }
inline double get_f64(const std::byte* p) { return std::bit_cast<double>(get_u64(p)); }

}  // namespace le

template <class Rec>
class BlockWriter;

/// An owned record file on the block store; removed from the store when the
/// handle is destroyed. Block k holds records [kB, (k+1)B).
template <class Rec>
class BlockFile {
 public:
  BlockFile() = default;
  BlockFile(BlockFile&& other) noexcept
      : store_(std::exchange(other.store_, nullptr)),
        id_(std::exchange(other.id_, 0)),
        length_(std::exchange(other.length_, 0)) {}
  BlockFile& operator=(BlockFile&& other) noexcept {
    if (this != &other) {
      release();
      store_ = std::exchange(other.store_, nullptr);
      id_ = std::exchange(other.id_, 0);
      length_ = std::exchange(other.length_, 0);
    }
    return *this;
  }
  BlockFile(const BlockFile&) = delete;
  BlockFile& operator=(const BlockFile&) = delete;
  ~BlockFile() { release(); }

  std::size_t size() const { return length_; }
  bool empty() const { return length_ == 0; }
  bool valid() const { return store_ != nullptr; }
  std::size_t block_count() const {
    if (store_ == nullptr || length_ == 0) return 0;
    const std::size_t b = store_->block_records();
    return (length_ + b - 1) / b;
  }
  BlockStore& store() const {
    if (store_ == nullptr) throw std::logic_error("BlockFile: no backing store");
    return *store_;
  }
  FileId id() const { return id_; }

 private:
  friend class BlockWriter<Rec>;
  BlockFile(BlockStore* store, FileId id, std::size_t length) : store_(store), id_(id), length_(length) {}

  void release() noexcept {
    if (store_ != nullptr) store_->remove_file(id_);
    store_ = nullptr;
    length_ = 0;
  }

  BlockStore* store_ = nullptr;
  FileId id_ = 0;
  std::size_t length_ = 0;
};

/// Appends records through a one-block staging buffer; a block write is
/// counted every time the buffer fills and once more on close() for a
/// partial tail.
template <class Rec>
class BlockWriter {
  using Traits = RecordTraits<Rec>;

 public:
  explicit BlockWriter(BlockStore& store)
      : store_(&store),
        id_(store.create_file()),
        lease_(store.memory(), store.block_records()),
        buffer_(store.block_records() * Traits::size) {}
  BlockWriter(BlockWriter&& other) noexcept
      : store_(std::exchange(other.store_, nullptr)),
        id_(other.id_),
        lease_(std::move(other.lease_)),
        buffer_(std::move(other.buffer_)),
        staged_(std::exchange(other.staged_, 0)),
        length_(std::exchange(other.length_, 0)) {}
  BlockWriter& operator=(BlockWriter&&) = delete;
  BlockWriter(const BlockWriter&) = delete;
  BlockWriter& operator=(const BlockWriter&) = delete;
  ~BlockWriter() {
    if (store_ != nullptr) store_->remove_file(id_);
  }

  void append(const Rec& rec) {
    if (store_ == nullptr) throw std::logic_error("BlockWriter: append after close");
    Traits::encode(rec, buffer_.data() + staged_ * Traits::size);
    ++length_;
    if (++staged_ == store_->block_records()) flush();
  }

  void append(std::span<const Rec> recs) {
    for (const auto& r : recs) append(r);
  }

  std::size_t size() const { return length_; }

  BlockFile<Rec> close() {
    if (store_ == nullptr) throw std::logic_error("BlockWriter: already closed");
    if (staged_ > 0) flush();
    lease_.reset();
    BlockStore* store = std::exchange(store_, nullptr);
    return BlockFile<Rec>(store, id_, length_);
  }

 private:
  void flush() {
    store_->write_block(id_, std::span<const std::byte>(buffer_.data(), staged_ * Traits::size));
    staged_ = 0;
  }

  BlockStore* store_;
  FileId id_;
  MemoryLease lease_;
  std::vector<std::byte> buffer_;
  std::size_t staged_ = 0;
  std::size_t length_ = 0;
};

/// Reads block `index` of `file`. Throws std::out_of_range past the last block.
template <class Rec>
std::vector<Rec> read_block(const BlockFile<Rec>& file, std::size_t index) {
  using Traits = RecordTraits<Rec>;
  if (index >= file.block_count()) {
    throw std::out_of_range("read_block: block index " + std::to_string(index) + " out of range");
  }
  BlockStore& store = file.store();
  const std::size_t b = store.block_records();
  const std::size_t first = index * b;
  const std::size_t count = std::min(b, file.size() - first);
  std::vector<std::byte> raw(count * Traits::size);
  store.read_block(file.id(), static_cast<std::uint64_t>(first) * Traits::size, raw);
  std::vector<Rec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(Traits::decode(raw.data() + i * Traits::size));
  return out;
}

/// Sequential scan holding one block buffer.
template <class Rec>
class BlockReader {
 public:
  explicit BlockReader(const BlockFile<Rec>& file)
      : file_(&file), lease_(file.valid() ? MemoryLease(file.store().memory(), file.store().block_records()) : MemoryLease()) {
    fill();
  }
  BlockReader(BlockReader&&) noexcept = default;
  BlockReader(const BlockReader&) = delete;
  BlockReader& operator=(const BlockReader&) = delete;

  const Rec* peek() const { return pos_ < buffer_.size() ? &buffer_[pos_] : nullptr; }
  bool done() const { return peek() == nullptr; }

  std::optional<Rec> next() {
    if (pos_ >= buffer_.size()) return std::nullopt;
    Rec r = buffer_[pos_++];
    if (pos_ == buffer_.size()) fill();
    return r;
  }

 private:
  void fill() {
    buffer_.clear();
    pos_ = 0;
    if (next_block_ < file_->block_count()) buffer_ = read_block(*file_, next_block_++);
  }

  const BlockFile<Rec>* file_;
  MemoryLease lease_;
  std::vector<Rec> buffer_;
  std::size_t pos_ = 0;
  std::size_t next_block_ = 0;
};

template <class Rec>
BlockFile<Rec> write_all(BlockStore& store, std::span<const Rec> recs) {
  BlockWriter<Rec> w(store);
  w.append(recs);
  return w.close();
}

/// Loads a whole file. Test and audit helper; charges no memory lease.
template <class Rec>
std::vector<Rec> read_all(const BlockFile<Rec>& file) {
  std::vector<Rec> out;
  out.reserve(file.size());
  for (std::size_t b = 0; b < file.block_count(); ++b) {
    auto blk = read_block(file, b);
    out.insert(out.end(), blk.begin(), blk.end());
  }
  return out;
}

/// Stable external merge sort. Run formation loads at most floor(M/B)*B
/// records at a time; merge passes use fan-in at most m.
template <class Rec, class Less>
BlockFile<Rec> external_sort(const BlockFile<Rec>& input, Less less) {
  BlockStore& store = input.store();
  const std::size_t b = store.block_records();
  const std::size_t run_blocks = std::max<std::size_t>(1, store.config().memory_records / b);
  const std::size_t fan_in = std::max<std::size_t>(2, store.fanout());

  std::vector<BlockFile<Rec>> runs;
  {
    std::size_t block = 0;
    const std::size_t blocks = input.block_count();
    while (block < blocks) {
      const std::size_t take = std::min(run_blocks, blocks - block);
      MemoryLease lease(store.memory(), take * b);
      std::vector<Rec> run;
      run.reserve(take * b);
      for (std::size_t i = 0; i < take; ++i, ++block) {
        auto blk = read_block(input, block);
        run.insert(run.end(), blk.begin(), blk.end());
      }
      std::stable_sort(run.begin(), run.end(), less);
      runs.push_back(write_all<Rec>(store, run));
    }
  }
  if (runs.empty()) return BlockWriter<Rec>(store).close();

  while (runs.size() > 1) {
    std::vector<BlockFile<Rec>> next;
    for (std::size_t first = 0; first < runs.size(); first += fan_in) {
      const std::size_t last = std::min(runs.size(), first + fan_in);
      if (last - first == 1) {
        next.push_back(std::move(runs[first]));
        continue;
      }
      std::vector<BlockReader<Rec>> readers;
      readers.reserve(last - first);
      for (std::size_t r = first; r < last; ++r) readers.emplace_back(runs[r]);
      MemoryLease heap_lease(store.memory(), readers.size());
      // Ties go to the lower run index, which preserves input order.
      auto heap_less = [&](std::size_t a, std::size_t c) {
        const Rec& ra = *readers[a].peek();
        const Rec& rc = *readers[c].peek();
        if (less(rc, ra)) return true;
        if (less(ra, rc)) return false;
        return a > c;
      };
      std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(heap_less)> heap(heap_less);
      for (std::size_t r = 0; r < readers.size(); ++r) {
        if (!readers[r].done()) heap.push(r);
      }
      BlockWriter<Rec> out(store);
      while (!heap.empty()) {
        const std::size_t r = heap.top();
        heap.pop();
        out.append(*readers[r].next());
        if (!readers[r].done()) heap.push(r);
      }
      readers.clear();
      next.push_back(out.close());
      for (std::size_t r = first; r < last; ++r) runs[r] = BlockFile<Rec>();
    }
    runs = std::move(next);
  }
  return std::move(runs.front());
}

}  // namespace maxrs

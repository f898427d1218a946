#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "maxrs/datasets.hpp"
#include "maxrs/emstore.hpp"

using namespace maxrs;

namespace {

struct Rec {
  std::uint64_t key = 0;
  std::uint64_t tag = 0;
  friend bool operator==(const Rec&, const Rec&) = default;
};

}  // namespace

template <>
struct maxrs::RecordTraits<Rec> {
  static constexpr std::size_t size = 16;
  static void encode(const Rec& r, std::byte* p) {
    le::put_u64(p, r.key);
    le::put_u64(p + 8, r.tag);
  }
  static Rec decode(const std::byte* p) { return {le::get_u64(p), le::get_u64(p + 8)}; }
};

namespace {

std::vector<Rec> numbered(std::size_t n) {
  std::vector<Rec> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back({i, i});
  return v;
}

bool key_less(const Rec& a, const Rec& b) { return a.key < b.key; }

}  // namespace

TEST(EMConfig, Validation) {
  EXPECT_NO_THROW((EMConfig{8, 128, 0}.validate()));
  EXPECT_THROW((EMConfig{0, 128, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((EMConfig{8, 15, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((EMConfig{8, 128, 1}.validate()), std::invalid_argument);
  EXPECT_THROW((EMConfig{8, 128, 15}.validate()), std::invalid_argument);
  EXPECT_EQ((EMConfig{8, 128, 0}.effective_fanout()), 14u);
  EXPECT_EQ((EMConfig{4, 16, 0}.effective_fanout()), 2u);
  EXPECT_EQ((EMConfig{8, 16, 0}.effective_fanout()), 2u);
  EXPECT_EQ((EMConfig{8, 128, 0}.memory_ceiling()), 128u + 16u * 8u);
}

TEST(MemoryTracker, ThrowsPastLimit) {
  MemoryTracker t(10);
  {
    MemoryLease a(t, 6);
    EXPECT_THROW(MemoryLease(t, 5), std::length_error);
    EXPECT_EQ(t.current(), 6u);
  }
  EXPECT_EQ(t.current(), 0u);
  EXPECT_EQ(t.high_water(), 6u);
}

TEST(BlockStore, ReadBlock) {
  BlockStore store(EMConfig{4, 8, 0});
  auto f = write_all<Rec>(store, numbered(10));
  const IOStats before = store.io_snapshot();
  const auto blk = read_block(f, 2);
  EXPECT_EQ(blk.size(), 2u);
  EXPECT_EQ(blk[0].key, 8u);
  EXPECT_EQ(store.io_snapshot().blocks_read, before.blocks_read + 1);
  EXPECT_THROW(read_block(f, 3), std::out_of_range);

  auto empty = write_all<Rec>(store, {});
  EXPECT_THROW(read_block(empty, 0), std::out_of_range);
}

TEST(BlockStore, SequentialReadCountsBlocks) {
  BlockStore store(EMConfig{10, 20, 0});
  auto f = write_all<Rec>(store, numbered(1000));
  const IOStats before = store.io_snapshot();
  BlockReader<Rec> r(f);
  std::size_t n = 0;
  while (r.next()) ++n;
  EXPECT_EQ(n, 1000u);
  EXPECT_EQ(store.io_snapshot().blocks_read - before.blocks_read, 100u);
}

TEST(BlockStore, AppendCountsFlushedBlocks) {
  for (auto [count, expected] : {std::pair{25u, 3u}, std::pair{0u, 0u}, std::pair{10u, 1u}}) {
    BlockStore store(EMConfig{10, 20, 0});
    BlockWriter<Rec> w(store);
    for (std::size_t i = 0; i < count; ++i) w.append(Rec{i, 0});
    auto f = w.close();
    EXPECT_EQ(store.io_snapshot().blocks_written, expected);
    EXPECT_EQ(f.size(), count);
    EXPECT_THROW(w.append(Rec{}), std::logic_error);
  }
}

TEST(BlockStore, IoSnapshot) {
  BlockStore store(EMConfig{4, 8, 0});
  EXPECT_EQ(store.io_snapshot(), (IOStats{0, 0}));
  auto f = write_all<Rec>(store, numbered(4));
  const IOStats w = store.io_snapshot();
  read_block(f, 0);
  EXPECT_EQ(store.io_snapshot().blocks_read, w.blocks_read + 1);
}

TEST(BlockStore, RoundTripIsBitIdentical) {
  std::mt19937_64 rng(1);
  BlockStore store(EMConfig{7, 14, 0});
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<WeightedObject> objs;
    for (int i = 0; i < 53 * trial; ++i) {
      objs.push_back({std::bit_cast<double>(rng() & 0x7fefffffffffffffULL), -0.0, 1e-300});
    }
    auto f = write_all<WeightedObject>(store, objs);
    const auto back = read_all(f);
    ASSERT_EQ(back.size(), objs.size());
    for (std::size_t i = 0; i < objs.size(); ++i) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(back[i].x), std::bit_cast<std::uint64_t>(objs[i].x));
      EXPECT_TRUE(std::signbit(back[i].y));
    }
  }
}

TEST(BlockStore, FilesAreRemovedWithTheirHandles) {
  BlockStore store(EMConfig{4, 8, 0});
  {
    auto f = write_all<Rec>(store, numbered(9));
    EXPECT_EQ(store.live_files(), 1u);
  }
  EXPECT_EQ(store.live_files(), 0u);
}

TEST(ExternalSort, SortedInputUnchanged) {
  BlockStore store(EMConfig{10, 40, 0});
  auto f = write_all<Rec>(store, numbered(100));
  const IOStats before = store.io_snapshot();
  auto sorted = external_sort(f, key_less);
  EXPECT_EQ(read_all(sorted), numbered(100));
  const IOStats used = store.io_snapshot() - before;
  EXPECT_GT(used.blocks_read, 0u);
  EXPECT_GT(used.blocks_written, 0u);
}

TEST(ExternalSort, ReverseInputWithinIoBound) {
  const std::size_t n = 1000, B = 10, M = 100;
  BlockStore store(EMConfig{B, M, 0});
  std::vector<Rec> recs;
  for (std::size_t i = 0; i < n; ++i) recs.push_back({n - i, i});
  auto f = write_all<Rec>(store, recs);
  const IOStats before = store.io_snapshot();
  auto sorted = external_sort(f, key_less);
  const auto used = (store.io_snapshot() - before).total();
  auto expected = recs;
  std::sort(expected.begin(), expected.end(), key_less);
  EXPECT_EQ(read_all(sorted), expected);
  const double levels = 1 + std::ceil(std::log(double(n) / M) / std::log(double(M) / B));
  EXPECT_LE(double(used), 8.0 * (double(n) / B) * levels);
}

TEST(ExternalSort, StableOnEqualKeys) {
  BlockStore store(EMConfig{4, 8, 0});
  std::vector<Rec> recs;
  for (std::size_t i = 0; i < 300; ++i) recs.push_back({7, i});
  auto f = write_all<Rec>(store, recs);
  EXPECT_EQ(read_all(external_sort(f, key_less)), recs);
}

TEST(ExternalSort, PermutationAndStabilityOnRandomKeys) {
  std::mt19937_64 rng(4);
  BlockStore store(EMConfig{3, 9, 0});
  std::vector<Rec> recs;
  for (std::size_t i = 0; i < 777; ++i) recs.push_back({rng() % 20, i});
  auto f = write_all<Rec>(store, recs);
  auto expected = recs;
  std::stable_sort(expected.begin(), expected.end(), key_less);
  EXPECT_EQ(read_all(external_sort(f, key_less)), expected);
  EXPECT_LE(store.memory().high_water(), store.config().memory_ceiling());
}

TEST(ExternalSort, EmptyInput) {
  BlockStore store(EMConfig{4, 8, 0});
  auto f = write_all<Rec>(store, {});
  EXPECT_TRUE(external_sort(f, key_less).empty());
}

TEST(DirectoryStorage, BehavesLikeMemory) {
  const auto dir = std::filesystem::temp_directory_path() / "maxrs_dirstore_test";
  std::filesystem::create_directories(dir);
  {
    BlockStore disk(EMConfig{5, 20, 0}, make_directory_storage(dir));
    BlockStore mem(EMConfig{5, 20, 0});
    std::vector<Rec> recs;
    for (std::size_t i = 0; i < 123; ++i) recs.push_back({(i * 37) % 50, i});
    auto a = external_sort(write_all<Rec>(disk, recs), key_less);
    auto b = external_sort(write_all<Rec>(mem, recs), key_less);
    EXPECT_EQ(read_all(a), read_all(b));
    EXPECT_EQ(disk.io_snapshot(), mem.io_snapshot());
  }
  EXPECT_TRUE(std::filesystem::is_empty(dir));
  std::filesystem::remove_all(dir);
}

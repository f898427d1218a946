#include "maxrs/emstore.hpp"

#include <fstream>
#include <map>
#include <string>
#include <unordered_map>

namespace maxrs {

void EMConfig::validate() const {
  if (block_records < 1) throw std::invalid_argument("EMConfig: B must be at least 1");
  if (memory_records < 2 * block_records) throw std::invalid_argument("EMConfig: M must be at least 2B");
  if (fanout != 0) {
    const std::size_t blocks = memory_records / block_records;
    const std::size_t cap = blocks > 4 ? blocks - 2 : 2;
    if (fanout < 2 || fanout > cap) {
      throw std::invalid_argument("EMConfig: fanout must lie in [2, max(2, M/B - 2)]");
    }
  }
}

std::size_t EMConfig::effective_fanout() const {
  if (fanout != 0) return fanout;
  const std::size_t blocks = memory_records / block_records;
  return blocks > 4 ? blocks - 2 : 2;
}

std::size_t EMConfig::memory_ceiling() const {
  return memory_records + (effective_fanout() + 2) * block_records;
}

void MemoryTracker::acquire(std::size_t records) {
  if (current_ + records > limit_) {
    throw std::length_error("memory budget exceeded: " + std::to_string(current_ + records) + " > " +
                            std::to_string(limit_) + " records");
  }
  current_ += records;
  high_water_ = std::max(high_water_, current_);
}

void MemoryTracker::release(std::size_t records) noexcept {
  current_ = records > current_ ? 0 : current_ - records;
}

namespace {

class MemoryStorage final : public Storage {
 public:
  FileId create() override {
    files_.emplace(next_, std::vector<std::byte>{});
    return next_++;
  }
  void remove(FileId id) noexcept override { files_.erase(id); }
  void append(FileId id, std::span<const std::byte> bytes) override {
    auto& f = get(id);
    f.insert(f.end(), bytes.begin(), bytes.end());
  }
  void read(FileId id, std::uint64_t offset, std::span<std::byte> out) override {
    const auto& f = get(id);
    if (offset + out.size() > f.size()) throw std::out_of_range("MemoryStorage: read past end of file");
    std::copy_n(f.begin() + static_cast<std::ptrdiff_t>(offset), out.size(), out.begin());
  }
  std::uint64_t size(FileId id) const override {
    auto it = files_.find(id);
    if (it == files_.end()) throw std::out_of_range("MemoryStorage: unknown file");
    return it->second.size();
  }

 private:
  std::vector<std::byte>& get(FileId id) {
    auto it = files_.find(id);
    if (it == files_.end()) throw std::out_of_range("MemoryStorage: unknown file");
    return it->second;
  }

  std::unordered_map<FileId, std::vector<std::byte>> files_;
  FileId next_ = 1;
};

class DirectoryStorage final : public Storage {
 public:
  explicit DirectoryStorage(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!std::filesystem::is_directory(dir_)) {
      throw std::invalid_argument("DirectoryStorage: not a directory: " + dir_.string());
    }
  }
  ~DirectoryStorage() override {
    for (auto& [id, entry] : files_) {
      entry.stream.close();
      std::error_code ec;
      std::filesystem::remove(path_of(id), ec);
    }
  }

  FileId create() override {
    const FileId id = next_++;
    Entry e;
    e.stream.open(path_of(id), std::ios::binary | std::ios::in | std::ios::out | std::ios::trunc);
    if (!e.stream) throw std::runtime_error("DirectoryStorage: cannot create " + path_of(id).string());
    files_.emplace(id, std::move(e));
    return id;
  }
  void remove(FileId id) noexcept override {
    auto it = files_.find(id);
    if (it == files_.end()) return;
    it->second.stream.close();
    files_.erase(it);
    std::error_code ec;
    std::filesystem::remove(path_of(id), ec);
  }
  void append(FileId id, std::span<const std::byte> bytes) override {
    auto& e = get(id);
    e.stream.seekp(static_cast<std::streamoff>(e.size));
    e.stream.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!e.stream) throw std::runtime_error("DirectoryStorage: write failed");
    e.size += bytes.size();
  }
  void read(FileId id, std::uint64_t offset, std::span<std::byte> out) override {
    auto& e = get(id);
    if (offset + out.size() > e.size) throw std::out_of_range("DirectoryStorage: read past end of file");
    e.stream.seekg(static_cast<std::streamoff>(offset));
    e.stream.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!e.stream) throw std::runtime_error("DirectoryStorage: read failed");
  }
  std::uint64_t size(FileId id) const override {
    auto it = files_.find(id);
    if (it == files_.end()) throw std::out_of_range("DirectoryStorage: unknown file");
    return it->second.size;
  }

 private:
  struct Entry {
    std::fstream stream;
    std::uint64_t size = 0;
  };

  Entry& get(FileId id) {
    auto it = files_.find(id);
    if (it == files_.end()) throw std::out_of_range("DirectoryStorage: unknown file");
    return it->second;
  }
  std::filesystem::path path_of(FileId id) const { return dir_ / ("blk_" + std::to_string(id) + ".dat"); }

  std::filesystem::path dir_;
  std::map<FileId, Entry> files_;
  FileId next_ = 1;
};

}  // namespace

std::unique_ptr<Storage> make_memory_storage() { return std::make_unique<MemoryStorage>(); }

std::unique_ptr<Storage> make_directory_storage(const std::filesystem::path& dir) {
  return std::make_unique<DirectoryStorage>(dir);
}

BlockStore::BlockStore(EMConfig config, std::unique_ptr<Storage> storage)
    : config_(config),
      fanout_((config.validate(), config.effective_fanout())),
      storage_(std::move(storage)),
      memory_(config.memory_ceiling()) {
  if (!storage_) throw std::invalid_argument("BlockStore: null storage");
}

FileId BlockStore::create_file() {
  const FileId id = storage_->create();
  ++live_files_;
  return id;
}

void BlockStore::remove_file(FileId id) noexcept {
  storage_->remove(id);
  if (live_files_ > 0) --live_files_;
}

void BlockStore::write_block(FileId id, std::span<const std::byte> bytes) {
  storage_->append(id, bytes);
  ++io_.blocks_written;
}

void BlockStore::read_block(FileId id, std::uint64_t offset, std::span<std::byte> out) {
  storage_->read(id, offset, out);
  ++io_.blocks_read;
}

}  // namespace maxrs

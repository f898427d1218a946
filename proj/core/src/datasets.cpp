#include "maxrs/datasets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace maxrs {

namespace {

constexpr std::array<char, 4> kMagic{'M', 'X', 'R', 'S'};

// Top 53 bits of one draw, mapped to [0, 1).
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

class Sampler {
 public:
  explicit Sampler(const GenSpec& spec) : spec_(spec), rng_(spec.seed) {}

  WeightedObject next() {
    WeightedObject o;
    if (spec_.distribution == Distribution::kUniform) {
      o.x = unit_draw(rng_) * spec_.extent;
      o.y = unit_draw(rng_) * spec_.extent;
    } else {
      o.x = gaussian_coord();
      o.y = gaussian_coord();
    }
    o.w = spec_.weights == WeightMode::kUnit ? 1.0 : static_cast<double>(1 + rng_() % 10);
    return o;
  }

 private:
  double gaussian() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = 0.0;
    do {
      u1 = unit_draw(rng_);
    } while (u1 == 0.0);
    const double u2 = unit_draw(rng_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    return r * std::cos(t);
  }

  double gaussian_coord() {
    for (;;) {
      const double v = spec_.extent / 2.0 + gaussian() * spec_.extent / 8.0;
      if (v >= 0.0 && v <= spec_.extent) return v;
    }
  }

  GenSpec spec_;
  std::mt19937_64 rng_;
  std::optional<double> spare_;
};

void check_spec(const GenSpec& spec) {
  if (!(spec.extent > 0.0) || !std::isfinite(spec.extent)) throw std::invalid_argument("GenSpec: extent must be > 0");
}

void write_header(std::ostream& out, std::uint16_t flags, std::uint64_t count) {
  std::array<std::byte, kObjectHeaderSize> h{};
  std::memcpy(h.data(), kMagic.data(), 4);
  le::put_u16(h.data() + 4, 1);
  le::put_u16(h.data() + 6, flags);
  le::put_u64(h.data() + 8, count);
  out.write(reinterpret_cast<const char*>(h.data()), h.size());
}

void write_record(std::ostream& out, const WeightedObject& o) {
  std::array<std::byte, RecordTraits<WeightedObject>::size> r{};
  RecordTraits<WeightedObject>::encode(o, r.data());
  out.write(reinterpret_cast<const char*>(r.data()), r.size());
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

ObjectFileHeader parse_header(std::istream& in, const std::filesystem::path& path) {
  std::array<std::byte, kObjectHeaderSize> h{};
  in.read(reinterpret_cast<char*>(h.data()), h.size());
  if (in.gcount() != static_cast<std::streamsize>(h.size())) {
    throw std::runtime_error(path.string() + ": truncated object file header");
  }
  if (std::memcmp(h.data(), kMagic.data(), 4) != 0) throw std::runtime_error(path.string() + ": bad magic");
  ObjectFileHeader hdr;
  hdr.version = le::get_u16(h.data() + 4);
  hdr.flags = le::get_u16(h.data() + 6);
  hdr.count = le::get_u64(h.data() + 8);
  if (hdr.version != 1) throw std::runtime_error(path.string() + ": unsupported version");
  return hdr;
}

template <class Sink>
void scan_object_file(const std::filesystem::path& path, Sink&& sink) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const ObjectFileHeader hdr = parse_header(in, path);
  std::array<std::byte, RecordTraits<WeightedObject>::size> r{};
  for (std::uint64_t i = 0; i < hdr.count; ++i) {
    in.read(reinterpret_cast<char*>(r.data()), r.size());
    if (in.gcount() != static_cast<std::streamsize>(r.size())) {
      throw std::runtime_error(path.string() + ": truncated at record " + std::to_string(i));
    }
    sink(RecordTraits<WeightedObject>::decode(r.data()));
  }
}

}  // namespace

GenSpec GenSpec::scaled(std::size_t n, std::uint64_t seed, Distribution distribution) {
  GenSpec s;
  s.n = n;
  s.extent = n == 0 ? 1.0 : 4.0 * static_cast<double>(n);
  s.distribution = distribution;
  s.seed = seed;
  return s;
}

std::vector<WeightedObject> generate_objects(const GenSpec& spec) {
  check_spec(spec);
  Sampler s(spec);
  std::vector<WeightedObject> out;
  out.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) out.push_back(s.next());
  return out;
}

BlockFile<WeightedObject> generate(BlockStore& store, const GenSpec& spec) {
  check_spec(spec);
  Sampler s(spec);
  BlockWriter<WeightedObject> w(store);
  for (std::size_t i = 0; i < spec.n; ++i) w.append(s.next());
  return w.close();
}

void save_objects(const std::filesystem::path& path, std::span<const WeightedObject> objects, std::uint16_t flags) {
  auto out = open_out(path);
  write_header(out, flags, objects.size());
  for (const auto& o : objects) write_record(out, o);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void save_objects(const std::filesystem::path& path, const BlockFile<WeightedObject>& objects, std::uint16_t flags) {
  auto out = open_out(path);
  write_header(out, flags, objects.size());
  if (objects.valid()) {
    BlockReader<WeightedObject> reader(objects);
    while (auto o = reader.next()) write_record(out, *o);
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ObjectFileHeader read_object_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_header(in, path);
}

std::vector<WeightedObject> read_object_file(const std::filesystem::path& path) {
  std::vector<WeightedObject> out;
  scan_object_file(path, [&](const WeightedObject& o) { out.push_back(o); });
  return out;
}

BlockFile<WeightedObject> load_objects(BlockStore& store, const std::filesystem::path& path) {
  BlockWriter<WeightedObject> w(store);
  scan_object_file(path, [&](const WeightedObject& o) { w.append(o); });
  return w.close();
}

std::vector<WeightedObject> parse_text_points(const std::filesystem::path& path, double default_weight,
                                              bool normalize) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<WeightedObject> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<double> vals;
    std::string tok;
    while (ss >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(v)) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + tok + "'", lineno);
      }
      vals.push_back(v);
    }
    if (vals.empty()) continue;
    if (vals.size() != 2 && vals.size() != 3) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 'x y' or 'x y w'", lineno);
    }
    const double w = vals.size() == 3 ? vals[2] : default_weight;
    if (w < 0.0) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": negative weight", lineno);
    out.push_back({vals[0], vals[1], w});
  }
  if (normalize && !out.empty()) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& o : out) {
      xmin = std::min(xmin, o.x);
      xmax = std::max(xmax, o.x);
      ymin = std::min(ymin, o.y);
      ymax = std::max(ymax, o.y);
    }
    auto scale = [](double v, double lo, double hi) {
      return hi > lo ? (v - lo) / (hi - lo) * kNormalizedExtent : 0.0;
    };
    for (auto& o : out) {
      o.x = scale(o.x, xmin, xmax);
      o.y = scale(o.y, ymin, ymax);
    }
  }
  return out;
}

BlockFile<WeightedObject> load_text_points(BlockStore& store, const std::filesystem::path& path,
                                           double default_weight, bool normalize) {
  const auto objects = parse_text_points(path, default_weight, normalize);
  return write_all<WeightedObject>(store, objects);
}

}  // namespace maxrs

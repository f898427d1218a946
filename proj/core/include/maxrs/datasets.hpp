#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxrs/emstore.hpp"
#include "maxrs/geometry.hpp"

namespace maxrs {

/// Object record: x, y, w as little-endian IEEE-754 doubles (24 bytes).
template <>
struct RecordTraits<WeightedObject> {
  static constexpr std::size_t size = 24;
  static void encode(const WeightedObject& o, std::byte* p) {
    le::put_f64(p, o.x);
    le::put_f64(p + 8, o.y);
    le::put_f64(p + 16, o.w);
  }
  static WeightedObject decode(const std::byte* p) { return {le::get_f64(p), le::get_f64(p + 8), le::get_f64(p + 16)}; }
};

enum class Distribution { kUniform, kGaussian };
enum class WeightMode { kUnit, kRandomInt };

/// Synthetic dataset description. The domain is [0, extent]^2.
struct GenSpec {
  std::size_t n = 0;
  double extent = 1.0;
  Distribution distribution = Distribution::kUniform;
  WeightMode weights = WeightMode::kUnit;
  std::uint64_t seed = 1;

  /// Domain scaled with cardinality: extent = 4n.
  static GenSpec scaled(std::size_t n, std::uint64_t seed = 1,
                        Distribution distribution = Distribution::kUniform);
};

/// Generator algorithm ids recorded in the object file header flags.
inline constexpr std::uint16_t kGeneratorNone = 0;
inline constexpr std::uint16_t kGeneratorMt19937_64 = 1;

/// Deterministic generation with std::mt19937_64 seeded by spec.seed.
/// Per object the stream yields x, then y, then (RANDOM_INT only) the weight.
/// Uniform coordinates take the top 53 bits of one draw; Gaussian ones use
/// Box-Muller with mean extent/2 and deviation extent/8, redrawn until they
/// land inside the domain. Random weights are 1 + draw % 10.
std::vector<WeightedObject> generate_objects(const GenSpec& spec);
BlockFile<WeightedObject> generate(BlockStore& store, const GenSpec& spec);

struct ObjectFileHeader {
  std::uint16_t version = 1;
  std::uint16_t flags = kGeneratorNone;
  std::uint64_t count = 0;
};

inline constexpr std::size_t kObjectHeaderSize = 16;

/// Writes "MXRS" | version u16 | flags u16 | count u64 | 24-byte records.
void save_objects(const std::filesystem::path& path, std::span<const WeightedObject> objects,
                  std::uint16_t flags = kGeneratorNone);
void save_objects(const std::filesystem::path& path, const BlockFile<WeightedObject>& objects,
                  std::uint16_t flags = kGeneratorNone);

ObjectFileHeader read_object_header(const std::filesystem::path& path);
std::vector<WeightedObject> read_object_file(const std::filesystem::path& path);
/// Imports an object file into the store; block writes are counted.
BlockFile<WeightedObject> load_objects(BlockStore& store, const std::filesystem::path& path);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr double kNormalizedExtent = 1000000.0;

/// Parses "x y" or "x y w" lines (blank lines and '#' comments skipped). With
/// `normalize`, each axis is min-max scaled onto [0, 1000000].
std::vector<WeightedObject> parse_text_points(const std::filesystem::path& path, double default_weight,
                                              bool normalize);
BlockFile<WeightedObject> load_text_points(BlockStore& store, const std::filesystem::path& path,
                                           double default_weight, bool normalize);

}  // namespace maxrs

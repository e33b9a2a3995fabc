#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ifsq {

/// Distribution a SampleSet is drawn from.
struct SampleSource {
  enum class Kind { standard_normal, uniform };
  Kind kind = Kind::standard_normal;
  double lo = 0.0;
  double hi = 1.0;

  static SampleSource standard_normal() { return {Kind::standard_normal, 0.0, 1.0}; }
  static SampleSource uniform(double lo, double hi);

  std::string describe() const;
  friend bool operator==(const SampleSource&, const SampleSource&) = default;
};

struct SampleSet {
  std::vector<double> values;
  std::uint64_t seed = 0;
  SampleSource source;
};

/// SplitMix64 finalizer; used to derive per-chunk seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Number of values generated per independent substream.
inline constexpr std::size_t kSampleChunk = 65536;

/// Draws n values deterministically.
///
/// The output is split into chunks of kSampleChunk values. Chunk c uses a
/// std::mt19937_64 seeded with mix64(seed ^ mix64(c + 1)); uniforms take the
/// top 53 bits of each draw, normals use the Marsaglia polar method. Chunks
/// are filled independently and concatenated in order, so the values are
/// bit-identical for any worker count.
SampleSet sample(const SampleSource& source, std::size_t n, std::uint64_t seed,
                 unsigned workers = 1);

}  // namespace ifsq

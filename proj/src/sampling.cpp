#include "ifsq/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "ifsq/parallel.hpp"

namespace ifsq {

namespace {

double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

void fill_chunk(const SampleSource& source, std::uint64_t chunk_seed, double* out,
                std::size_t count) {
  std::mt19937_64 engine(chunk_seed);
  if (source.kind == SampleSource::Kind::uniform) {
    const double width = source.hi - source.lo;
    for (std::size_t i = 0; i < count; ++i) out[i] = source.lo + width * unit_uniform(engine);
    return;
  }
  std::size_t i = 0;
  while (i < count) {
    double u, v, s;
    do {
      u = 2.0 * unit_uniform(engine) - 1.0;
      v = 2.0 * unit_uniform(engine) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    out[i++] = u * scale;
    if (i < count) out[i++] = v * scale;
  }
}

}  // namespace

SampleSource SampleSource::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw std::invalid_argument("uniform source needs finite lo < hi");
  }
  return {Kind::uniform, lo, hi};
}

std::string SampleSource::describe() const {
  if (kind == Kind::standard_normal) return "normal";
  return fmt::format("uniform({:g},{:g})", lo, hi);
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SampleSet sample(const SampleSource& source, std::size_t n, std::uint64_t seed, unsigned workers) {
  if (n == 0) throw std::invalid_argument("sample count must be >= 1");
  if (source.kind == SampleSource::Kind::uniform) (void)SampleSource::uniform(source.lo, source.hi);

  SampleSet set{std::vector<double>(n), seed, source};
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::size_t begin = c * kSampleChunk;
    const std::size_t count = std::min(kSampleChunk, n - begin);
    fill_chunk(source, mix64(seed ^ mix64(c + 1)), set.values.data() + begin, count);
  });
  return set;
}

}  // namespace ifsq

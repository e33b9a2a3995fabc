#include "ifsq/compression.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ifsq {

void CompressionSpec::validate() const {
  if (downsample < 1) throw std::invalid_argument("downsample factor must be >= 1");
  if (latent_dim < 1) throw std::invalid_argument("latent dimension must be >= 1");
  if (bits < 1) throw std::invalid_argument("bit width must be >= 1");
  if (downsample > (1u << 20)) throw std::invalid_argument("downsample factor too large");
}

std::string to_string(CompressionSpec::Variant v) {
  switch (v) {
    case CompressionSpec::Variant::continuous: return "continuous";
    case CompressionSpec::Variant::vq: return "vq";
    case CompressionSpec::Variant::ifsq: return "ifsq";
  }
  return "unknown";
}

CompressionSpec::Variant parse_variant(const std::string& text) {
  if (text == "continuous" || text == "ae" || text == "vae") return CompressionSpec::Variant::continuous;
  if (text == "vq") return CompressionSpec::Variant::vq;
  if (text == "ifsq" || text == "fsq") return CompressionSpec::Variant::ifsq;
  throw std::invalid_argument("unknown variant '" + text + "'");
}

CompressionRatio compression_ratio(const CompressionSpec& spec) {
  spec.validate();
  const std::uint64_t f = spec.downsample;
  const std::uint64_t raw = 24 * f * f;
  std::uint64_t latent = 0;
  switch (spec.variant) {
    case CompressionSpec::Variant::continuous:
    case CompressionSpec::Variant::ifsq:
      latent = static_cast<std::uint64_t>(spec.bits) * spec.latent_dim;
      break;
    case CompressionSpec::Variant::vq:
      latent = spec.bits;
      break;
  }
  const auto g = std::gcd(raw, latent);
  return {raw / g, latent / g};
}

double compression_ratio_for_levels(std::uint32_t downsample, std::uint32_t latent_dim,
                                    std::uint32_t levels) {
  CompressionSpec{CompressionSpec::Variant::ifsq, downsample, latent_dim, 1}.validate();
  const double f = downsample;
  return 24.0 * f * f / (latent_dim * bits_per_dim_for_levels(levels).log2_levels);
}

LevelBits bits_per_dim_for_levels(std::uint32_t levels) {
  if (levels < 2) throw std::invalid_argument("level count must be >= 2");
  LevelBits out{std::log2(static_cast<double>(levels)), std::nullopt};
  if (std::has_single_bit(levels - 1)) {
    out.table_bits = static_cast<std::uint32_t>(std::countr_zero(levels - 1));
  }
  return out;
}

}  // namespace ifsq

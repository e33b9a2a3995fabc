#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace ifsq {

/// Latent layout of a tokenizer for compression-ratio accounting.
/// `bits` is the float precision (continuous), the codebook index width
/// (vq), or the bits per latent channel (ifsq).
struct CompressionSpec {
  enum class Variant { continuous, vq, ifsq };
  Variant variant = Variant::ifsq;
  std::uint32_t downsample = 8;  // f
  std::uint32_t latent_dim = 4;  // d, unused for vq
  std::uint32_t bits = 4;

  void validate() const;
};

std::string to_string(CompressionSpec::Variant v);
CompressionSpec::Variant parse_variant(const std::string& text);

/// Raw 24-bit RGB pixel bits over latent bits, as a reduced fraction.
struct CompressionRatio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  /// Printed tables truncate toward zero (76.8 -> 76, 54.86 -> 54).
  std::uint64_t floored() const { return numerator / denominator; }
};

/// continuous: 24 f^2 / (precision * d); vq: 24 f^2 / codebook_bits;
/// ifsq: 24 f^2 / (d * bits_per_dim).
CompressionRatio compression_ratio(const CompressionSpec& spec);

/// Real-valued ifsq ratio 24 f^2 / (d * log2 L) for an arbitrary level count.
double compression_ratio_for_levels(std::uint32_t downsample, std::uint32_t latent_dim,
                                    std::uint32_t levels);

struct LevelBits {
  double log2_levels = 0.0;               // information content of one channel
  std::optional<std::uint32_t> table_bits;  // K when L == 2^K + 1
};

/// Bits carried by one channel with L levels. Throws for L < 2.
LevelBits bits_per_dim_for_levels(std::uint32_t levels);

}  // namespace ifsq

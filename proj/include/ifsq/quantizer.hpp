#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ifsq {

/// Raised when a caller passes NaN or infinity into a quantizer path.
class NonFiniteInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters of the scaled-logistic bounding family
/// s(z) = amplitude * sigmoid(slope * z) + offset.
///
/// The image of s is the open interval (offset, amplitude + offset).
/// With amplitude 2 and offset -1 this is (-1, 1); slope 2 reproduces tanh.
struct BoundParams {
  double amplitude = 2.0;
  double slope = 1.6;
  double offset = -1.0;

  /// Validates and returns the triple; throws std::invalid_argument.
  static BoundParams make(double amplitude, double slope, double offset);

  /// 2 * sigmoid(1.6 z) - 1
  static constexpr BoundParams ifsq() { return {2.0, 1.6, -1.0}; }
  /// 2 * sigmoid(2 z) - 1, identical to tanh(z)
  static constexpr BoundParams tanh_equivalent() { return {2.0, 2.0, -1.0}; }
  static constexpr BoundParams with_slope(double slope) { return {2.0, slope, -1.0}; }

  void validate() const;
};

/// Numerically stable logistic function.
double sigmoid(double x) noexcept;

/// amplitude * sigmoid(slope * z) + offset. Throws NonFiniteInput on NaN/inf.
double bound(double z, const BoundParams& params);

/// d/dz of bound(): amplitude * slope * s * (1 - s) with s = sigmoid(slope * z).
double bound_derivative(double z, const BoundParams& params);

/// Per-dimension level counts of the implicit codebook.
///
/// Every entry is at least 2 and the product of all entries fits in
/// std::uint64_t; construction throws otherwise. An empty spec has a
/// codebook of size 1.
class LevelSpec {
 public:
  LevelSpec() = default;
  explicit LevelSpec(std::vector<std::uint32_t> levels);

  /// L = 2^bits + 1 in every one of `dims` dimensions.
  static LevelSpec from_bits(unsigned bits, std::size_t dims);

  std::size_t dims() const noexcept { return levels_.size(); }
  std::uint32_t operator[](std::size_t j) const { return levels_[j]; }
  std::span<const std::uint32_t> levels() const noexcept { return levels_; }
  std::uint64_t codebook_size() const noexcept { return codebook_size_; }

  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;

 private:
  std::vector<std::uint32_t> levels_;
  std::uint64_t codebook_size_ = 1;
};

std::uint64_t codebook_size(const LevelSpec& levels);

using Digits = std::vector<std::uint32_t>;

struct QuantizedLatent {
  Digits digits;
  std::vector<double> dequantized;
};

/// Straight-through estimator output: forward values are the dequantized
/// grid points, the derivative is that of the unrounded path.
struct SteOutput {
  std::vector<double> dequantized;
  std::vector<double> derivative;
};

/// Rounds values already bounded to [-1, 1] onto the level grid:
///   q = round((L - 1) / 2 * (y + 1))
/// Inputs outside [-1, 1] are clamped first. Ties round half away from zero,
/// which is part of the token format.
Digits quantize_bounded(std::span<const double> bounded, const LevelSpec& levels);

/// Bounds, rounds and dequantizes each coordinate of z.
QuantizedLatent quantize(std::span<const double> z, const LevelSpec& levels,
                         const BoundParams& params);

SteOutput quantize_ste(std::span<const double> z, const LevelSpec& levels,
                       const BoundParams& params);

/// (q - (L - 1) / 2) * 2 / (L - 1) per dimension.
std::vector<double> dequantize(std::span<const std::uint32_t> digits, const LevelSpec& levels);

/// Dequantized value of a single digit with level count L.
double dequantize_level(std::uint32_t digit, std::uint32_t levels);

}  // namespace ifsq

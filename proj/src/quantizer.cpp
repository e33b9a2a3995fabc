#include "ifsq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ifsq {

namespace {

void require_finite(double z) {
  if (!std::isfinite(z)) throw NonFiniteInput("non-finite latent value");
}

void require_dims(std::size_t got, const LevelSpec& levels) {
  if (got != levels.dims()) {
    throw std::invalid_argument("dimension mismatch: got " + std::to_string(got) +
                                " values for " + std::to_string(levels.dims()) +
                                " level entries");
  }
}

}  // namespace

BoundParams BoundParams::make(double amplitude, double slope, double offset) {
  BoundParams p{amplitude, slope, offset};
  p.validate();
  return p;
}

void BoundParams::validate() const {
  if (!std::isfinite(amplitude) || !std::isfinite(slope) || !std::isfinite(offset)) {
    throw std::invalid_argument("bound parameters must be finite");
  }
  if (!(amplitude > 0.0)) throw std::invalid_argument("bound amplitude must be > 0");
  if (!(slope > 0.0)) throw std::invalid_argument("bound slope must be > 0");
}

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double bound(double z, const BoundParams& params) {
  require_finite(z);
  return params.amplitude * sigmoid(params.slope * z) + params.offset;
}

double bound_derivative(double z, const BoundParams& params) {
  require_finite(z);
  const double s = sigmoid(params.slope * z);
  return params.amplitude * params.slope * s * (1.0 - s);
}

LevelSpec::LevelSpec(std::vector<std::uint32_t> levels) : levels_(std::move(levels)) {
  std::uint64_t size = 1;
  for (std::size_t j = 0; j < levels_.size(); ++j) {
    if (levels_[j] < 2) {
      throw std::invalid_argument("level count at dimension " + std::to_string(j) +
                                  " must be >= 2");
    }
    if (size > std::numeric_limits<std::uint64_t>::max() / levels_[j]) {
      throw std::overflow_error("codebook size exceeds 64-bit range");
    }
    size *= levels_[j];
  }
  codebook_size_ = size;
}

LevelSpec LevelSpec::from_bits(unsigned bits, std::size_t dims) {
  if (bits < 1 || bits > 31) throw std::invalid_argument("bits per dimension must be in [1, 31]");
  const auto l = static_cast<std::uint32_t>((1u << bits) + 1u);
  return LevelSpec(std::vector<std::uint32_t>(dims, l));
}

std::uint64_t codebook_size(const LevelSpec& levels) { return levels.codebook_size(); }

Digits quantize_bounded(std::span<const double> bounded, const LevelSpec& levels) {
  require_dims(bounded.size(), levels);
  Digits q(bounded.size());
  for (std::size_t j = 0; j < bounded.size(); ++j) {
    require_finite(bounded[j]);
    const double y = std::clamp(bounded[j], -1.0, 1.0);
    const double half_width = (levels[j] - 1) / 2.0;
    // std::round: half away from zero; argument is non-negative here.
    const double r = std::round(half_width * (y + 1.0));
    q[j] = static_cast<std::uint32_t>(std::clamp(r, 0.0, static_cast<double>(levels[j] - 1)));
  }
  return q;
}

QuantizedLatent quantize(std::span<const double> z, const LevelSpec& levels,
                         const BoundParams& params) {
  require_dims(z.size(), levels);
  std::vector<double> y(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) y[j] = bound(z[j], params);
  QuantizedLatent out;
  out.digits = quantize_bounded(y, levels);
  out.dequantized = dequantize(out.digits, levels);
  return out;
}

SteOutput quantize_ste(std::span<const double> z, const LevelSpec& levels,
                       const BoundParams& params) {
  // Forward: round(scaled) - stop(scaled) + scaled == round(scaled), so the
  // value is the dequantized grid point. Backward: only the scaled term
  // carries a derivative, and dividing by half_width cancels the scale.
  auto q = quantize(z, levels, params);
  SteOutput out;
  out.dequantized = std::move(q.dequantized);
  out.derivative.resize(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out.derivative[j] = bound_derivative(z[j], params);
  return out;
}

double dequantize_level(std::uint32_t digit, std::uint32_t levels) {
  if (levels < 2) throw std::invalid_argument("level count must be >= 2");
  if (digit >= levels) throw std::out_of_range("digit out of range for level count");
  const double half_width = (levels - 1) / 2.0;
  return (digit - half_width) * (2.0 / (levels - 1));
}

std::vector<double> dequantize(std::span<const std::uint32_t> digits, const LevelSpec& levels) {
  require_dims(digits.size(), levels);
  std::vector<double> out(digits.size());
  for (std::size_t j = 0; j < digits.size(); ++j) {
    if (digits[j] >= levels[j]) {
      throw std::out_of_range("digit " + std::to_string(digits[j]) + " out of range at dimension " +
                              std::to_string(j));
    }
    out[j] = dequantize_level(digits[j], levels[j]);
  }
  return out;
}

}  // namespace ifsq

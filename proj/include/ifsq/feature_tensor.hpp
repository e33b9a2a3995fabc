#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ifsq {

/// Row-major N x d grid of 32-bit features (one row per token).
class FeatureTensor {
 public:
  FeatureTensor() = default;
  /// Throws std::invalid_argument unless tokens, dim >= 1, values has
  /// tokens * dim entries and every entry is finite.
  FeatureTensor(std::size_t tokens, std::size_t dim, std::vector<float> values,
                std::optional<int> layer_id = std::nullopt);

  std::size_t tokens() const noexcept { return tokens_; }
  std::size_t dim() const noexcept { return dim_; }
  std::optional<int> layer_id() const noexcept { return layer_id_; }
  void set_layer_id(std::optional<int> id) noexcept { layer_id_ = id; }

  std::span<const float> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  std::span<const float> values() const noexcept { return values_; }

  friend bool operator==(const FeatureTensor&, const FeatureTensor&) = default;

 private:
  std::size_t tokens_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> values_;
  std::optional<int> layer_id_;
};

}  // namespace ifsq

#pragma once

#include <cstddef>
#include <span>

#include "ifsq/feature_tensor.hpp"

namespace ifsq {

/// Mean cosine similarity plus the number of pairs whose cosine was forced
/// to zero because one side was an all-zero row.
struct SimilarityResult {
  double value = 0.0;
  std::size_t zero_rows = 0;
};

/// Cosine of two equal-length vectors; 0 when either has zero norm.
double cosine(std::span<const float> a, std::span<const float> b);

/// Self-token similarity: (1/N) sum_i cos(layer_i, embedding_i).
SimilarityResult sts(const FeatureTensor& layer, const FeatureTensor& embedding);

/// Next-token similarity: (1/(N-1)) sum_{i<N-1} cos(layer_i, embedding_{i+1}).
/// Requires N >= 2.
SimilarityResult nts(const FeatureTensor& layer, const FeatureTensor& embedding);

/// Product-moment correlation. Throws on length mismatch, fewer than two
/// points, non-finite input or zero variance in either series.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace ifsq

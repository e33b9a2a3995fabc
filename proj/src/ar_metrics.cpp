#include "ifsq/ar_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ifsq {

FeatureTensor::FeatureTensor(std::size_t tokens, std::size_t dim, std::vector<float> values,
                             std::optional<int> layer_id)
    : tokens_(tokens), dim_(dim), values_(std::move(values)), layer_id_(layer_id) {
  if (tokens_ < 1 || dim_ < 1) throw std::invalid_argument("feature tensor needs N >= 1 and d >= 1");
  if (values_.size() / dim_ != tokens_ || values_.size() % dim_ != 0) {
    throw std::invalid_argument("feature tensor holds " + std::to_string(values_.size()) +
                                " values, expected N * d");
  }
  for (float v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("feature tensor contains non-finite values");
  }
}

namespace {

void require_same_shape(const FeatureTensor& a, const FeatureTensor& b) {
  if (a.tokens() != b.tokens() || a.dim() != b.dim()) {
    throw std::invalid_argument("shape mismatch: " + std::to_string(a.tokens()) + "x" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.tokens()) + "x" +
                                std::to_string(b.dim()));
  }
}

bool is_zero(std::span<const float> v) {
  for (float x : v) {
    if (x != 0.0f) return false;
  }
  return true;
}

}  // namespace

double cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine of vectors with different lengths");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += static_cast<double>(a[k]) * b[k];
    na += static_cast<double>(a[k]) * a[k];
    nb += static_cast<double>(b[k]) * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

SimilarityResult sts(const FeatureTensor& layer, const FeatureTensor& embedding) {
  require_same_shape(layer, embedding);
  SimilarityResult r;
  double sum = 0.0;
  for (std::size_t i = 0; i < layer.tokens(); ++i) {
    if (is_zero(layer.row(i)) || is_zero(embedding.row(i))) ++r.zero_rows;
    sum += cosine(layer.row(i), embedding.row(i));
  }
  r.value = sum / static_cast<double>(layer.tokens());
  return r;
}

SimilarityResult nts(const FeatureTensor& layer, const FeatureTensor& embedding) {
  require_same_shape(layer, embedding);
  if (layer.tokens() < 2) throw std::invalid_argument("next-token similarity needs N >= 2");
  SimilarityResult r;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < layer.tokens(); ++i) {
    if (is_zero(layer.row(i)) || is_zero(embedding.row(i + 1))) ++r.zero_rows;
    sum += cosine(layer.row(i), embedding.row(i + 1));
  }
  r.value = sum / static_cast<double>(layer.tokens() - 1);
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw std::invalid_argument("pearson: non-finite input");
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::max(-1.0, std::min(1.0, r));
}

}  // namespace ifsq

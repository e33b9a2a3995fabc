#include "ifsq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ifsq {

namespace {

void require_unit_range(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  for (double x : samples) {
    if (!(x >= -1.0 && x <= 1.0)) {
      throw std::domain_error("sample outside [-1, 1]: " + std::to_string(x));
    }
  }
}

std::vector<double> sorted_copy(std::span<const double> samples) {
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<std::size_t> rank_order(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return order;
}

void require_levels(std::uint32_t levels) {
  if (levels < 2) throw std::invalid_argument("level count must be >= 2");
}

}  // namespace

Histogram Histogram::from_digits(std::span<const std::uint32_t> digits, std::size_t bins) {
  Histogram h{std::vector<std::uint64_t>(bins, 0), 0};
  for (auto d : digits) {
    if (d >= bins) throw std::out_of_range("digit outside histogram range");
    ++h.counts[d];
  }
  h.total = digits.size();
  return h;
}

double ks_uniform_sorted(std::span<const double> sorted) {
  require_unit_range(sorted);
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = 0.5 * (sorted[i] + 1.0);
    const double above = static_cast<double>(i + 1) / n - cdf;
    const double below = cdf - static_cast<double>(i) / n;
    d = std::max({d, std::abs(above), std::abs(below)});
  }
  return d;
}

double ks_uniform(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  return ks_uniform_sorted(sorted_copy(samples));
}

double rmse_uniform_sorted(std::span<const double> sorted) {
  require_unit_range(sorted);
  const double n = static_cast<double>(sorted.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double target = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / n;
    const double diff = sorted[i] - target;
    sum += diff * diff;
  }
  return std::sqrt(sum / n);
}

double rmse_uniform(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  return rmse_uniform_sorted(sorted_copy(samples));
}

double entropy_bits(const Histogram& h) {
  if (h.total == 0) throw std::invalid_argument("entropy of an empty histogram");
  const double total = static_cast<double>(h.total);
  double bits = 0.0;
  for (auto c : h.counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    bits -= p * std::log2(p);
  }
  return std::max(bits, 0.0);
}

Utilization utilization(const Histogram& h) {
  const double bins = static_cast<double>(h.bin_count());
  const double bits = entropy_bits(h);
  const auto occupied = std::count_if(h.counts.begin(), h.counts.end(), [](auto c) { return c > 0; });
  return {std::exp2(bits) / bins, static_cast<double>(occupied) / bins};
}

ScalarQuantization equal_interval_quantize(std::span<const double> samples, std::uint32_t levels,
                                           ClipRange clip) {
  require_levels(levels);
  if (!std::isfinite(clip.lo) || !std::isfinite(clip.hi) || !(clip.lo < clip.hi)) {
    throw std::invalid_argument("clip range needs finite lo < hi");
  }
  const double width = (clip.hi - clip.lo) / levels;
  ScalarQuantization out;
  out.edges.resize(levels + 1);
  out.centers.resize(levels);
  for (std::uint32_t k = 0; k <= levels; ++k) out.edges[k] = clip.lo + k * width;
  out.edges[levels] = clip.hi;
  for (std::uint32_t k = 0; k < levels; ++k) out.centers[k] = clip.lo + (k + 0.5) * width;

  out.digits.resize(samples.size());
  out.reconstruction.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) throw NonFiniteInput("non-finite sample");
    const double x = std::clamp(samples[i], clip.lo, clip.hi);
    const double pos = std::floor((x - clip.lo) / width);
    const auto k = static_cast<std::uint32_t>(std::clamp(pos, 0.0, static_cast<double>(levels - 1)));
    out.digits[i] = k;
    out.reconstruction[i] = out.centers[k];
  }
  return out;
}

ScalarQuantization equal_probability_quantize(std::span<const double> samples,
                                              std::uint32_t levels) {
  require_levels(levels);
  const std::size_t n = samples.size();
  if (n < levels) throw std::invalid_argument("equal-probability quantization needs N >= L");
  if (n > std::numeric_limits<std::uint64_t>::max() / levels) throw std::length_error("sample set too large");
  for (double x : samples) {
    if (!std::isfinite(x)) throw NonFiniteInput("non-finite sample");
  }

  const auto order = rank_order(samples);
  ScalarQuantization out;
  out.digits.resize(n);
  std::vector<double> sums(levels, 0.0);
  std::vector<std::uint64_t> counts(levels, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto k = static_cast<std::uint32_t>((static_cast<std::uint64_t>(r) * levels) / n);
    out.digits[order[r]] = k;
    sums[k] += samples[order[r]];
    ++counts[k];
  }
  out.centers.resize(levels);
  for (std::uint32_t k = 0; k < levels; ++k) out.centers[k] = sums[k] / static_cast<double>(counts[k]);

  out.edges.resize(levels + 1);
  out.edges[0] = samples[order.front()];
  out.edges[levels] = samples[order.back()];
  for (std::uint32_t k = 1; k < levels; ++k) {
    // first rank of bin k is ceil(k N / L)
    const auto r = static_cast<std::size_t>((static_cast<std::uint64_t>(k) * n + levels - 1) / levels);
    out.edges[k] = 0.5 * (samples[order[r - 1]] + samples[order[r]]);
  }

  out.reconstruction.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.reconstruction[i] = out.centers[out.digits[i]];
  return out;
}

std::string SchemeSpec::name() const {
  switch (kind) {
    case Kind::equal_interval: return "equal_interval";
    case Kind::equal_probability: return "equal_probability";
    case Kind::ifsq_grid: return "ifsq_grid";
  }
  return "unknown";
}

void SchemeSpec::validate() const {
  require_levels(levels);
  if (kind == Kind::ifsq_grid) {
    bound.validate();
  } else if (!std::isfinite(clip.lo) || !std::isfinite(clip.hi) || !(clip.lo < clip.hi)) {
    throw std::invalid_argument("clip range needs finite lo < hi");
  }
}

DistributionReport scheme_report(std::span<const double> samples, const SchemeSpec& scheme) {
  scheme.validate();
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  const std::size_t n = samples.size();

  // Continuous input of the quantizer and the same values mapped onto [-1, 1].
  std::vector<double> input(n);
  std::vector<double> unit(n);
  ScalarQuantization q;
  if (scheme.kind == SchemeSpec::Kind::ifsq_grid) {
    for (std::size_t i = 0; i < n; ++i) input[i] = std::clamp(bound(samples[i], scheme.bound), -1.0, 1.0);
    unit = input;
    const LevelSpec single({scheme.levels});
    q.digits.resize(n);
    q.reconstruction.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto d = quantize_bounded(std::span(&input[i], 1), single)[0];
      q.digits[i] = d;
      q.reconstruction[i] = dequantize_level(d, scheme.levels);
    }
    q.centers.resize(scheme.levels);
    for (std::uint32_t k = 0; k < scheme.levels; ++k) q.centers[k] = dequantize_level(k, scheme.levels);
  } else {
    const auto [lo, hi] = scheme.clip;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(samples[i])) throw NonFiniteInput("non-finite sample");
      input[i] = std::clamp(samples[i], lo, hi);
      unit[i] = std::clamp(2.0 * (input[i] - lo) / (hi - lo) - 1.0, -1.0, 1.0);
    }
    q = scheme.kind == SchemeSpec::Kind::equal_interval
            ? equal_interval_quantize(input, scheme.levels, scheme.clip)
            : equal_probability_quantize(input, scheme.levels);
  }

  DistributionReport report;
  report.scheme = scheme.name();
  std::sort(unit.begin(), unit.end());
  report.ks = ks_uniform_sorted(unit);
  report.rmse_uniform = rmse_uniform_sorted(unit);

  report.histogram = Histogram::from_digits(q.digits, scheme.levels);
  report.entropy_bits = entropy_bits(report.histogram);
  const auto util = utilization(report.histogram);
  report.utilization = util.perplexity_ratio;
  report.nonzero_bin_fraction = util.nonzero_fraction;

  std::vector<double> bin_sq(scheme.levels, 0.0);
  double sq_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = input[i] - q.reconstruction[i];
    bin_sq[q.digits[i]] += e * e;
    sq_total += e * e;
  }
  report.mse = sq_total / static_cast<double>(n);

  report.bins.resize(scheme.levels);
  for (std::uint32_t k = 0; k < scheme.levels; ++k) {
    const auto c = report.histogram.counts[k];
    report.bins[k] = {k, c, static_cast<double>(c) / static_cast<double>(n), q.centers[k],
                      bin_sq[k] / static_cast<double>(n)};
  }

  constexpr std::uint32_t kDeciles = 10;
  const auto order = rank_order(input);
  report.error_profile.resize(kDeciles);
  std::vector<std::size_t> decile_n(kDeciles, 0);
  for (std::uint32_t g = 0; g < kDeciles; ++g) report.error_profile[g].decile = g;
  for (std::size_t r = 0; r < n; ++r) {
    const auto g = static_cast<std::uint32_t>((static_cast<std::uint64_t>(r) * kDeciles) / n);
    const std::size_t i = order[r];
    auto& row = report.error_profile[g];
    const double e = input[i] - q.reconstruction[i];
    if (decile_n[g]++ == 0) row.x_lo = input[i];
    row.x_hi = input[i];
    row.mean_sq_error += e * e;
    row.max_abs_error = std::max(row.max_abs_error, std::abs(e));
  }
  for (std::uint32_t g = 0; g < kDeciles; ++g) {
    if (decile_n[g] > 0) report.error_profile[g].mean_sq_error /= static_cast<double>(decile_n[g]);
  }
  std::erase_if(report.error_profile, [&](const ErrorDecile& d) { return decile_n[d.decile] == 0; });
  return report;
}

std::vector<LabeledReport> figure1(std::uint32_t levels, std::size_t n, std::uint64_t seed,
                                   unsigned workers) {
  const ClipRange clip{-3.0, 3.0};
  const auto normal = sample(SampleSource::standard_normal(), n, seed, workers);
  const auto uniform = sample(SampleSource::uniform(clip.lo, clip.hi), n, seed ^ kUniformStream, workers);

  SchemeSpec interval{SchemeSpec::Kind::equal_interval, levels, clip, {}};
  SchemeSpec quantile{SchemeSpec::Kind::equal_probability, levels, clip, {}};

  std::vector<LabeledReport> out;
  out.push_back({normal.source.describe(), scheme_report(normal.values, interval)});
  out.push_back({normal.source.describe(), scheme_report(normal.values, quantile)});
  out.push_back({uniform.source.describe(), scheme_report(uniform.values, interval)});
  return out;
}

}  // namespace ifsq

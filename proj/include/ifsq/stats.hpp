#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ifsq/quantizer.hpp"
#include "ifsq/sampling.hpp"

namespace ifsq {

/// Occupancy counts over `bin_count()` bins. Invariant: sum(counts) == total.
struct Histogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  static Histogram from_digits(std::span<const std::uint32_t> digits, std::size_t bins);
  std::size_t bin_count() const noexcept { return counts.size(); }
};

/// Exact two-sided KS distance between the empirical CDF of `samples` and
/// the uniform CDF on [-1, 1]. Sorts a copy. Throws on empty input or a
/// value outside [-1, 1].
double ks_uniform(std::span<const double> samples);
/// Same as ks_uniform but requires `sorted` in non-decreasing order.
double ks_uniform_sorted(std::span<const double> sorted);

/// RMS distance between the order statistics of `samples` and the uniform
/// mid-quantiles u_i = -1 + 2 (i - 0.5) / N.
double rmse_uniform(std::span<const double> samples);
double rmse_uniform_sorted(std::span<const double> sorted);

/// Shannon entropy of the histogram in bits; empty bins contribute zero.
double entropy_bits(const Histogram& h);

struct Utilization {
  double perplexity_ratio = 0.0;  // 2^H / L
  double nonzero_fraction = 0.0;  // occupied bins / L
};
Utilization utilization(const Histogram& h);

struct ClipRange {
  double lo = -3.0;
  double hi = 3.0;
};

/// Result of a per-sample scalar quantizer. `edges` has levels + 1 entries;
/// `centers` holds the reconstruction value of every bin.
struct ScalarQuantization {
  Digits digits;
  std::vector<double> reconstruction;
  std::vector<double> centers;
  std::vector<double> edges;
};

/// Clips to [lo, hi], splits it into `levels` equal-width bins and
/// reconstructs at bin centers. The upper boundary falls into the last bin.
ScalarQuantization equal_interval_quantize(std::span<const double> samples, std::uint32_t levels,
                                           ClipRange clip);

/// Quantile binning: the sample of rank r (ties broken by position) goes to
/// bin floor(r * L / N), so bin counts differ by at most one. Reconstruction
/// is the mean of the samples in each bin. Requires N >= L.
ScalarQuantization equal_probability_quantize(std::span<const double> samples,
                                              std::uint32_t levels);

/// Which quantizer scheme_report runs.
struct SchemeSpec {
  enum class Kind { equal_interval, equal_probability, ifsq_grid };
  Kind kind = Kind::equal_interval;
  std::uint32_t levels = 9;
  ClipRange clip{};                        // equal_interval / equal_probability
  BoundParams bound = BoundParams::ifsq();  // ifsq_grid

  std::string name() const;
  void validate() const;
};

struct BinRow {
  std::uint32_t bin = 0;
  std::uint64_t count = 0;
  double prob = 0.0;
  double center = 0.0;
  double mse_contrib = 0.0;  // squared error of the bin's samples / N
};

struct ErrorDecile {
  std::uint32_t decile = 0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double mean_sq_error = 0.0;
  double max_abs_error = 0.0;
};

struct DistributionReport {
  std::string scheme;
  double ks = 0.0;
  double rmse_uniform = 0.0;
  double entropy_bits = 0.0;
  double utilization = 0.0;
  double nonzero_bin_fraction = 0.0;
  double mse = 0.0;
  Histogram histogram;
  std::vector<BinRow> bins;
  std::vector<ErrorDecile> error_profile;
};

/// Runs one scheme over raw samples and fills every report field.
///
/// Quantities are measured on the scheme's continuous input: for the
/// interval and quantile schemes that is the clipped sample, for ifsq_grid
/// it is the bounded value in [-1, 1]. ks and rmse_uniform use that input
/// mapped affinely onto [-1, 1]; mse compares it with its reconstruction.
DistributionReport scheme_report(std::span<const double> samples, const SchemeSpec& scheme);

struct LabeledReport {
  std::string source;
  DistributionReport report;
};

/// The three-panel comparison at `levels` bins: equal-interval and
/// equal-probability on a standard normal, clipped to [-3, 3], and
/// equal-interval on uniform(-3, 3). The uniform panel draws from
/// seed ^ kUniformStream.
inline constexpr std::uint64_t kUniformStream = 0x756e69666f726dULL;
std::vector<LabeledReport> figure1(std::uint32_t levels, std::size_t n, std::uint64_t seed,
                                   unsigned workers = 1);

}  // namespace ifsq

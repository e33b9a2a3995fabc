#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ifsq {

struct SweepRow {
  double alpha = 0.0;
  double ks = 0.0;
  double rmse = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Uniformity of 2 * sigmoid(alpha * z) - 1 for z ~ N(0, 1).
///
/// One normal sample set of size n is drawn from `seed` and shared by every
/// alpha (common random numbers), so each row is a deterministic function of
/// (alpha, n, seed). Rows come back in input order.
std::vector<SweepRow> alpha_sweep(std::span<const double> alphas, std::size_t n, std::uint64_t seed,
                                  unsigned workers = 1);

/// Sorted normal sample of size n, reused to score any alpha.
class AlphaObjective {
 public:
  AlphaObjective(std::size_t n, std::uint64_t seed, unsigned workers = 1);

  SweepRow evaluate(double alpha) const;
  double ks(double alpha) const { return evaluate(alpha).ks; }

 private:
  std::vector<double> sorted_normal_;
  std::uint64_t seed_;
};

struct OptimalAlpha {
  double alpha = 0.0;
  double ks = 0.0;
  double grid_alpha = 0.0;  // best point of the coarse grid
};

/// Minimizes KS(alpha) over [lo, hi]: a coarse grid of at most 0.05 spacing,
/// then golden-section refinement in the bracket around the best grid point
/// until the bracket is narrower than tol. Never returns a point with larger
/// KS than the best grid point.
OptimalAlpha find_optimal_alpha(double lo, double hi, std::size_t n, std::uint64_t seed, double tol,
                                unsigned workers = 1);

/// Parses "lo:hi:step" (inclusive endpoints) or a comma-separated list.
std::vector<double> parse_alpha_grid(const std::string& text);

}  // namespace ifsq

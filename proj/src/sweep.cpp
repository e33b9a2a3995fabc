#include "ifsq/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ifsq/parallel.hpp"
#include "ifsq/quantizer.hpp"
#include "ifsq/sampling.hpp"
#include "ifsq/stats.hpp"

namespace ifsq {

namespace {

void require_alpha(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    throw std::invalid_argument("alpha must be finite and > 0, got " + std::to_string(alpha));
  }
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

}  // namespace

AlphaObjective::AlphaObjective(std::size_t n, std::uint64_t seed, unsigned workers) : seed_(seed) {
  sorted_normal_ = sample(SampleSource::standard_normal(), n, seed, workers).values;
  std::sort(sorted_normal_.begin(), sorted_normal_.end());
}

SweepRow AlphaObjective::evaluate(double alpha) const {
  require_alpha(alpha);
  const auto params = BoundParams::with_slope(alpha);
  std::vector<double> bounded(sorted_normal_.size());
  for (std::size_t i = 0; i < bounded.size(); ++i) {
    bounded[i] = std::clamp(bound(sorted_normal_[i], params), -1.0, 1.0);
  }
  // bound is increasing, so the order survives; guard against libm ties.
  if (!std::is_sorted(bounded.begin(), bounded.end())) std::sort(bounded.begin(), bounded.end());
  return {alpha, ks_uniform_sorted(bounded), rmse_uniform_sorted(bounded), bounded.size(), seed_};
}

std::vector<SweepRow> alpha_sweep(std::span<const double> alphas, std::size_t n, std::uint64_t seed,
                                  unsigned workers) {
  if (alphas.empty()) throw std::invalid_argument("alpha list is empty");
  for (double a : alphas) require_alpha(a);
  const AlphaObjective objective(n, seed, workers);
  std::vector<SweepRow> rows(alphas.size());
  parallel_for(alphas.size(), workers, [&](std::size_t i) { rows[i] = objective.evaluate(alphas[i]); });
  return rows;
}

OptimalAlpha find_optimal_alpha(double lo, double hi, std::size_t n, std::uint64_t seed, double tol,
                                unsigned workers) {
  require_alpha(lo);
  require_alpha(hi);
  if (!(lo < hi)) throw std::invalid_argument("degenerate alpha interval");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");

  const AlphaObjective objective(n, seed, workers);

  const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / 0.05 - 1e-9));
  const double spacing = (hi - lo) / static_cast<double>(steps);
  std::vector<double> grid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) grid[k] = lo + spacing * static_cast<double>(k);
  grid.back() = hi;
  std::vector<double> ks(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t k) { ks[k] = objective.ks(grid[k]); });
  const auto best = static_cast<std::size_t>(std::min_element(ks.begin(), ks.end()) - ks.begin());

  OptimalAlpha result{grid[best], ks[best], grid[best]};

  double a = grid[best > 0 ? best - 1 : 0];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective.ks(c);
  double fd = objective.ks(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective.ks(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective.ks(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = objective.ks(mid);
  if (fmid < result.ks) {
    result.alpha = mid;
    result.ks = fmid;
  }
  return result;
}

std::vector<double> parse_alpha_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 + 1);
    if (p2 == std::string::npos || text.find(':', p2 + 1) != std::string::npos) {
      throw std::invalid_argument("range must look like lo:hi:step");
    }
    const double lo = parse_real(text.substr(0, p1));
    const double hi = parse_real(text.substr(p1 + 1, p2 - p1 - 1));
    const double step = parse_real(text.substr(p2 + 1));
    if (!(step > 0.0) || !(lo <= hi)) throw std::invalid_argument("range needs lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1000000) throw std::invalid_argument("range has too many points");
    for (std::size_t k = 0; k < count; ++k) {
      // Snap to the step's decimal grid so 1.0 + 12 * 0.05 prints as 1.6.
      const double v = lo + step * static_cast<double>(k);
      out.push_back(std::round(v * 1e12) / 1e12);
    }
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      const auto piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      out.push_back(parse_real(piece));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  for (double a : out) require_alpha(a);
  return out;
}

}  // namespace ifsq

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifsq/compression.hpp"
#include "ifsq/stats.hpp"
#include "ifsq/sweep.hpp"

namespace ifsq {

// CSV schemas (header line first, one record per line, '\n' terminated):
//
//   sweep          alpha,ks,rmse,n,seed
//   scheme bins    bin,count,prob,center,mse_contrib
//   error deciles  decile,x_lo,x_hi,mean_sq_error,max_abs_error
//   figure1        scheme,source,levels,n,ks,rmse_uniform,entropy_bits,utilization,nonzero_fraction,mse
//   cr             variant,f,d,bits,numerator,denominator,cr,cr_floor,cr_log2_levels
//   metrics        layer,sts,nts
//
// Reals are printed with %.12g so output bytes are stable across runs.

std::string format_real(double v);

std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::ordered_json sweep_json(const std::vector<SweepRow>& rows,
                                  const std::optional<OptimalAlpha>& optimum = std::nullopt);

std::string bins_csv(const DistributionReport& report);
std::string error_profile_csv(const DistributionReport& report);
nlohmann::ordered_json report_json(const DistributionReport& report);

std::string figure1_csv(const std::vector<LabeledReport>& reports, std::size_t n);
nlohmann::ordered_json figure1_json(const std::vector<LabeledReport>& reports, std::size_t n);

std::string cr_csv(const std::vector<CompressionSpec>& specs);
nlohmann::ordered_json cr_json(const std::vector<CompressionSpec>& specs);

struct MetricsRow {
  std::string layer;
  double sts = 0.0;
  double nts = 0.0;
  std::size_t zero_rows = 0;
};
std::string metrics_csv(const std::vector<MetricsRow>& rows);
nlohmann::ordered_json metrics_json(const std::vector<MetricsRow>& rows);

}  // namespace ifsq

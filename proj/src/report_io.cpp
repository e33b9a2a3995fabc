#include "ifsq/report_io.hpp"

#include <fmt/format.h>

namespace ifsq {

using nlohmann::ordered_json;

std::string format_real(double v) { return fmt::format("{:.12g}", v); }

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "alpha,ks,rmse,n,seed\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{}\n", format_real(r.alpha), format_real(r.ks), format_real(r.rmse), r.n,
                       r.seed);
  }
  return out;
}

ordered_json sweep_json(const std::vector<SweepRow>& rows, const std::optional<OptimalAlpha>& optimum) {
  ordered_json j;
  j["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"alpha", r.alpha}, {"ks", r.ks}, {"rmse", r.rmse}, {"n", r.n}, {"seed", r.seed}});
  }
  if (!rows.empty()) {
    const auto* best = &rows.front();
    for (const auto& r : rows) {
      if (r.ks < best->ks) best = &r;
    }
    j["argmin_ks_alpha"] = best->alpha;
  }
  if (optimum) {
    j["optimum"] = {{"alpha", optimum->alpha}, {"ks", optimum->ks}, {"grid_alpha", optimum->grid_alpha}};
  }
  return j;
}

std::string bins_csv(const DistributionReport& report) {
  std::string out = "bin,count,prob,center,mse_contrib\n";
  for (const auto& b : report.bins) {
    out += fmt::format("{},{},{},{},{}\n", b.bin, b.count, format_real(b.prob), format_real(b.center),
                       format_real(b.mse_contrib));
  }
  return out;
}

std::string error_profile_csv(const DistributionReport& report) {
  std::string out = "decile,x_lo,x_hi,mean_sq_error,max_abs_error\n";
  for (const auto& e : report.error_profile) {
    out += fmt::format("{},{},{},{},{}\n", e.decile, format_real(e.x_lo), format_real(e.x_hi),
                       format_real(e.mean_sq_error), format_real(e.max_abs_error));
  }
  return out;
}

ordered_json report_json(const DistributionReport& report) {
  ordered_json j;
  j["scheme"] = report.scheme;
  j["ks"] = report.ks;
  j["rmse_uniform"] = report.rmse_uniform;
  j["entropy_bits"] = report.entropy_bits;
  j["utilization"] = report.utilization;
  j["nonzero_bin_fraction"] = report.nonzero_bin_fraction;
  j["mse"] = report.mse;
  j["histogram"] = {{"bin_count", report.histogram.bin_count()},
                    {"counts", report.histogram.counts},
                    {"total", report.histogram.total}};
  j["bins"] = ordered_json::array();
  for (const auto& b : report.bins) {
    j["bins"].push_back({{"bin", b.bin},
                         {"count", b.count},
                         {"prob", b.prob},
                         {"center", b.center},
                         {"mse_contrib", b.mse_contrib}});
  }
  j["error_profile"] = ordered_json::array();
  for (const auto& e : report.error_profile) {
    j["error_profile"].push_back({{"decile", e.decile},
                                  {"x_lo", e.x_lo},
                                  {"x_hi", e.x_hi},
                                  {"mean_sq_error", e.mean_sq_error},
                                  {"max_abs_error", e.max_abs_error}});
  }
  return j;
}

std::string figure1_csv(const std::vector<LabeledReport>& reports, std::size_t n) {
  std::string out = "scheme,source,levels,n,ks,rmse_uniform,entropy_bits,utilization,nonzero_fraction,mse\n";
  for (const auto& [source, r] : reports) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.scheme, source, r.histogram.bin_count(), n,
                       format_real(r.ks), format_real(r.rmse_uniform), format_real(r.entropy_bits),
                       format_real(r.utilization), format_real(r.nonzero_bin_fraction), format_real(r.mse));
  }
  return out;
}

ordered_json figure1_json(const std::vector<LabeledReport>& reports, std::size_t n) {
  ordered_json j;
  j["n"] = n;
  j["reports"] = ordered_json::array();
  for (const auto& [source, r] : reports) {
    auto entry = report_json(r);
    entry["source"] = source;
    j["reports"].push_back(std::move(entry));
  }
  return j;
}

namespace {

std::string log2_levels_cell(const CompressionSpec& s) {
  if (s.variant != CompressionSpec::Variant::ifsq || s.bits > 31) return "";
  return format_real(compression_ratio_for_levels(s.downsample, s.latent_dim, (1u << s.bits) + 1u));
}

}  // namespace

std::string cr_csv(const std::vector<CompressionSpec>& specs) {
  std::string out = "variant,f,d,bits,numerator,denominator,cr,cr_floor,cr_log2_levels\n";
  for (const auto& s : specs) {
    const auto cr = compression_ratio(s);
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", to_string(s.variant), s.downsample, s.latent_dim, s.bits,
                       cr.numerator, cr.denominator, format_real(cr.value()), cr.floored(), log2_levels_cell(s));
  }
  return out;
}

ordered_json cr_json(const std::vector<CompressionSpec>& specs) {
  ordered_json rows = ordered_json::array();
  for (const auto& s : specs) {
    const auto cr = compression_ratio(s);
    ordered_json row{{"variant", to_string(s.variant)},
                     {"f", s.downsample},
                     {"d", s.latent_dim},
                     {"bits", s.bits},
                     {"numerator", cr.numerator},
                     {"denominator", cr.denominator},
                     {"cr", cr.value()},
                     {"cr_floor", cr.floored()}};
    if (s.variant == CompressionSpec::Variant::ifsq && s.bits <= 31) {
      row["levels"] = (1u << s.bits) + 1u;
      row["cr_log2_levels"] = compression_ratio_for_levels(s.downsample, s.latent_dim, (1u << s.bits) + 1u);
    }
    rows.push_back(std::move(row));
  }
  return {{"rows", rows}};
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out = "layer,sts,nts\n";
  for (const auto& r : rows) out += fmt::format("{},{},{}\n", r.layer, format_real(r.sts), format_real(r.nts));
  return out;
}

ordered_json metrics_json(const std::vector<MetricsRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"layer", r.layer}, {"sts", r.sts}, {"nts", r.nts}, {"zero_rows", r.zero_rows}});
  }
  return {{"rows", arr}};
}

}  // namespace ifsq

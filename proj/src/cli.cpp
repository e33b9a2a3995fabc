#include "ifsq/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "ifsq/ar_metrics.hpp"
#include "ifsq/compression.hpp"
#include "ifsq/index_codec.hpp"
#include "ifsq/parallel.hpp"
#include "ifsq/quantizer.hpp"
#include "ifsq/report_io.hpp"
#include "ifsq/sampling.hpp"
#include "ifsq/stats.hpp"
#include "ifsq/sweep.hpp"
#include "ifsq/tensor_io.hpp"

namespace ifsq::cli {

namespace {

/// Malformed flag values; mapped to the usage exit code.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Common {
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "csv";
  unsigned workers = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Random seed (falls back to $IFSQ_SEED, then 42)")->envname("IFSQ_SEED");
  cmd->add_option("--out", c.out, "Write results to this file instead of stdout");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", c.workers, "Worker threads; output does not depend on it")
      ->check(CLI::Range(1u, 256u));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_real(const std::string& s) {
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("not a number: '" + s + "'");
}

std::uint64_t to_uint(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
    throw UsageError("not a non-negative integer: '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw UsageError("integer out of range: '" + s + "'");
  }
}

std::vector<double> real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(to_real(p));
  return out;
}

std::vector<std::uint32_t> u32_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  for (const auto& p : split(text, ',')) {
    const auto v = to_uint(p);
    if (v > UINT32_MAX) throw UsageError("value too large: " + p);
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

/// "a", "a,b,c" or "lo:hi[:step]" over unsigned integers.
std::vector<std::uint32_t> u32_range(const std::string& text) {
  if (text.find(':') == std::string::npos) return u32_list(text);
  const auto parts = split(text, ':');
  if (parts.size() < 2 || parts.size() > 3) throw UsageError("range must look like lo:hi[:step]");
  const auto lo = to_uint(parts[0]);
  const auto hi = to_uint(parts[1]);
  const auto step = parts.size() == 3 ? to_uint(parts[2]) : 1;
  if (step == 0 || lo > hi || hi > UINT32_MAX || (hi - lo) / step > 100000) throw UsageError("bad integer range");
  std::vector<std::uint32_t> out;
  for (auto v = lo; v <= hi; v += step) out.push_back(static_cast<std::uint32_t>(v));
  return out;
}

ClipRange clip_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw UsageError("range must look like lo:hi");
  ClipRange r{to_real(parts[0]), to_real(parts[1])};
  if (!(r.lo < r.hi)) throw UsageError("range needs lo < hi");
  return r;
}

std::string emit_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

struct LevelOptions {
  std::string levels;
  unsigned bits = 0;
  std::size_t dims = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--levels", levels, "Comma-separated level count per dimension, e.g. 3,3,3,3");
    cmd->add_option("--bits", bits, "Bits K per dimension (L = 2^K + 1); use with --dims");
    cmd->add_option("--dims", dims, "Number of latent dimensions for --bits");
  }

  LevelSpec resolve() const {
    if (!levels.empty()) {
      if (bits != 0 || dims != 0) throw UsageError("--levels cannot be combined with --bits/--dims");
      return LevelSpec(u32_list(levels));
    }
    if (bits == 0 || dims == 0) throw UsageError("give --levels, or both --bits and --dims");
    return LevelSpec::from_bits(bits, dims);
  }
};

std::string digits_output(const Common& c, const LevelSpec& levels, TokenIndex index, const Digits& digits,
                          const std::optional<QuantizedLatent>& quantized) {
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["levels"] = std::vector<std::uint32_t>(levels.levels().begin(), levels.levels().end());
    j["codebook_size"] = levels.codebook_size();
    j["index"] = index.value;
    j["digits"] = digits;
    if (quantized) j["dequantized"] = quantized->dequantized;
    return emit_json(j);
  }
  std::string header = "index";
  std::string row = std::to_string(index.value);
  for (std::size_t j = 0; j < digits.size(); ++j) {
    header += fmt::format(",q{}", j);
    row += fmt::format(",{}", digits[j]);
  }
  return header + "\n" + row + "\n";
}

/// Files to write once the command succeeds: (path, contents).
using Outputs = std::vector<std::pair<std::string, std::string>>;

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite scalar quantization laboratory", "ifsq_lab"};
  app.require_subcommand(1);

  Common common;
  Outputs extra_files;
  std::function<std::string()> action;

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "KS/RMSE of 2*sigmoid(alpha*z)-1 against uniform over an alpha grid");
  std::string sweep_alphas = "1.0:2.4:0.05";
  std::size_t sweep_n = 500000;
  bool sweep_optimize = false;
  double sweep_tol = 0.01;
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("--alphas", sweep_alphas, "Grid as lo:hi:step (inclusive) or a comma list");
  sweep_cmd->add_option("--n", sweep_n, "Normal samples shared by every alpha")->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--optimize", sweep_optimize, "Also refine the KS-optimal alpha (JSON output only)");
  sweep_cmd->add_option("--tol", sweep_tol, "Refinement tolerance for --optimize")->check(CLI::PositiveNumber);
  sweep_cmd->callback([&] {
    action = [&] {
      std::vector<double> alphas;
      try {
        alphas = parse_alpha_grid(sweep_alphas);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto rows = alpha_sweep(alphas, sweep_n, common.seed, common.workers);
      if (common.format == "csv") return sweep_csv(rows);
      std::optional<OptimalAlpha> optimum;
      if (sweep_optimize) {
        const auto [lo, hi] = std::minmax_element(alphas.begin(), alphas.end());
        optimum = find_optimal_alpha(*lo, *hi, sweep_n, common.seed, sweep_tol, common.workers);
      }
      return emit_json(sweep_json(rows, optimum));
    };
  });

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Quantize one sample set with one scheme and report statistics");
  std::string an_scheme = "equal-interval";
  std::string an_source = "normal";
  std::string an_uniform = "-3:3";
  std::string an_clip = "-3:3";
  std::uint32_t an_levels = 9;
  double an_alpha = 1.6;
  std::size_t an_n = 500000;
  std::string an_errors_out;
  add_common(analyze_cmd, common);
  analyze_cmd->add_option("--scheme", an_scheme, "Quantizer")
      ->check(CLI::IsMember({"equal-interval", "equal-probability", "ifsq"}));
  analyze_cmd->add_option("--source", an_source, "Sample distribution")->check(CLI::IsMember({"normal", "uniform"}));
  analyze_cmd->add_option("--uniform-range", an_uniform, "lo:hi of the uniform source");
  analyze_cmd->add_option("--clip", an_clip, "lo:hi clip range of the interval and quantile schemes");
  analyze_cmd->add_option("--levels", an_levels, "Number of bins")->check(CLI::Range(2u, 1u << 20));
  analyze_cmd->add_option("--alpha", an_alpha, "Bound slope of the ifsq scheme")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--n", an_n, "Number of samples")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--errors-out", an_errors_out, "Also write the per-decile error table (CSV) here");
  analyze_cmd->callback([&] {
    action = [&] {
      SampleSource source = SampleSource::standard_normal();
      if (an_source == "uniform") {
        const auto r = clip_range(an_uniform);
        source = SampleSource::uniform(r.lo, r.hi);
      }
      SchemeSpec scheme;
      scheme.levels = an_levels;
      scheme.clip = clip_range(an_clip);
      scheme.bound = BoundParams::with_slope(an_alpha);
      scheme.kind = an_scheme == "equal-interval"      ? SchemeSpec::Kind::equal_interval
                    : an_scheme == "equal-probability" ? SchemeSpec::Kind::equal_probability
                                                       : SchemeSpec::Kind::ifsq_grid;
      const auto samples = sample(source, an_n, common.seed, common.workers);
      const auto report = scheme_report(samples.values, scheme);
      if (!an_errors_out.empty()) extra_files.emplace_back(an_errors_out, error_profile_csv(report));
      if (common.format == "csv") return bins_csv(report);
      auto j = report_json(report);
      j["source"] = source.describe();
      j["n"] = an_n;
      j["seed"] = common.seed;
      return emit_json(j);
    };
  });

  // figure1
  auto* fig_cmd = app.add_subcommand("figure1", "Equal-interval vs equal-probability comparison on normal and uniform data");
  std::uint32_t fig_levels = 9;
  std::size_t fig_n = 500000;
  add_common(fig_cmd, common);
  fig_cmd->add_option("--levels", fig_levels, "Number of bins")->check(CLI::Range(2u, 1u << 20));
  fig_cmd->add_option("--n", fig_n, "Samples per source")->check(CLI::PositiveNumber);
  fig_cmd->callback([&] {
    action = [&] {
      const auto reports = figure1(fig_levels, fig_n, common.seed, common.workers);
      return common.format == "csv" ? figure1_csv(reports, fig_n) : emit_json(figure1_json(reports, fig_n));
    };
  });

  // encode
  auto* enc_cmd = app.add_subcommand("encode", "Digits (or a latent vector) to a flat token index");
  LevelOptions enc_levels;
  std::string enc_digits;
  std::string enc_latent;
  double enc_alpha = 1.6;
  add_common(enc_cmd, common);
  enc_levels.add(enc_cmd);
  auto* enc_digits_opt = enc_cmd->add_option("--digits", enc_digits, "Comma-separated digits, first dimension most significant");
  auto* enc_latent_opt = enc_cmd->add_option("--latent", enc_latent, "Comma-separated latent values to bound and quantize");
  enc_digits_opt->excludes(enc_latent_opt);
  enc_cmd->add_option("--alpha", enc_alpha, "Bound slope used with --latent")->check(CLI::PositiveNumber);
  enc_cmd->callback([&] {
    action = [&] {
      const auto levels = enc_levels.resolve();
      if (!enc_latent.empty()) {
        const auto z = real_list(enc_latent);
        const auto q = quantize(z, levels, BoundParams::with_slope(enc_alpha));
        return digits_output(common, levels, encode_index(q.digits, levels), q.digits, q);
      }
      if (enc_digits.empty()) throw UsageError("give --digits or --latent");
      const auto digits = u32_list(enc_digits);
      return digits_output(common, levels, encode_index(digits, levels), digits, std::nullopt);
    };
  });

  // decode
  auto* dec_cmd = app.add_subcommand("decode", "Flat token index to per-dimension digits");
  LevelOptions dec_levels;
  std::uint64_t dec_index = 0;
  add_common(dec_cmd, common);
  dec_levels.add(dec_cmd);
  dec_cmd->add_option("--index", dec_index, "Token index")->required();
  dec_cmd->callback([&] {
    action = [&] {
      const auto levels = dec_levels.resolve();
      const TokenIndex index{dec_index};
      return digits_output(common, levels, index, decode_index(index, levels), std::nullopt);
    };
  });

  // cr
  auto* cr_cmd = app.add_subcommand("cr", "Compression ratio of 24-bit RGB pixels over latent bits");
  std::string cr_variant = "ifsq";
  std::string cr_f = "8";
  std::string cr_d = "4";
  std::string cr_bits = "4";
  add_common(cr_cmd, common);
  cr_cmd->add_option("--variant", cr_variant, "Latent kind")->check(CLI::IsMember({"continuous", "vq", "ifsq"}));
  cr_cmd->add_option("--f", cr_f, "Spatial downsampling factor(s): value, list or lo:hi[:step]");
  cr_cmd->add_option("--d", cr_d, "Latent channel count(s), ignored for vq");
  cr_cmd->add_option("--bits", cr_bits, "Precision, codebook or per-channel bits: value, list or lo:hi[:step]");
  cr_cmd->callback([&] {
    action = [&] {
      const auto variant = parse_variant(cr_variant);
      std::vector<CompressionSpec> specs;
      for (auto f : u32_range(cr_f)) {
        for (auto d : u32_range(cr_d)) {
          for (auto b : u32_range(cr_bits)) {
            CompressionSpec s{variant, f, d, b};
            s.validate();
            specs.push_back(s);
          }
        }
      }
      return common.format == "csv" ? cr_csv(specs) : emit_json(cr_json(specs));
    };
  });

  // metrics
  auto* met_cmd = app.add_subcommand("metrics", "Self- and next-token similarity of layer features");
  std::string met_embedding;
  std::vector<std::string> met_layers;
  std::string met_series;
  add_common(met_cmd, common);
  met_cmd->add_option("--embedding", met_embedding, "Input-embedding tensor file")->required();
  met_cmd->add_option("--layers", met_layers, "Layer tensor files, in layer order")->required();
  met_cmd->add_option("--series", met_series,
                      "Comma-separated per-layer scores; adds a 'pearson' row correlating them with sts and nts");
  met_cmd->callback([&] {
    action = [&] {
      std::vector<double> series;
      if (!met_series.empty()) {
        series = real_list(met_series);
        if (series.size() != met_layers.size()) throw UsageError("--series needs one value per layer");
      }
      const auto embedding = read_tensor(met_embedding);
      std::vector<MetricsRow> rows(met_layers.size());
      parallel_for(met_layers.size(), common.workers, [&](std::size_t i) {
        const auto layer = read_tensor(met_layers[i]);
        const auto s = sts(layer, embedding);
        const auto n = nts(layer, embedding);
        rows[i] = {std::to_string(i + 1), s.value, n.value, s.zero_rows + n.zero_rows};
      });
      for (const auto& r : rows) {
        if (r.zero_rows > 0) err << "warning: layer " << r.layer << " has " << r.zero_rows << " zero-row pairs\n";
      }
      if (!series.empty()) {
        std::vector<double> sts_col, nts_col;
        for (const auto& r : rows) {
          sts_col.push_back(r.sts);
          nts_col.push_back(r.nts);
        }
        rows.push_back({"pearson", pearson(series, sts_col), pearson(series, nts_col), 0});
      }
      return common.format == "csv" ? metrics_csv(rows) : emit_json(metrics_json(rows));
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    const std::string result = action();
    if (common.out.empty()) {
      out << result;
    } else {
      extra_files.emplace(extra_files.begin(), common.out, result);
    }
    for (const auto& [path, contents] : extra_files) {
      std::ofstream file(path, std::ios::binary | std::ios::trunc);
      file << contents;
      if (!file) throw std::runtime_error("cannot write " + path);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace ifsq::cli

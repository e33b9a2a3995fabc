#include "ifsq/tensor_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace ifsq {

namespace {

constexpr std::size_t kFixedHeader = 8;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | p[b];
  return v;
}

void require_finite(const std::vector<float>& values) {
  for (float v : values) {
    if (!std::isfinite(v)) throw TensorIoError(TensorErrc::non_finite, "tensor contains non-finite values");
  }
}

}  // namespace

const char* to_string(TensorErrc code) noexcept {
  switch (code) {
    case TensorErrc::io_failure: return "io_failure";
    case TensorErrc::truncated_header: return "truncated_header";
    case TensorErrc::bad_magic: return "bad_magic";
    case TensorErrc::unsupported_version: return "unsupported_version";
    case TensorErrc::unsupported_dtype: return "unsupported_dtype";
    case TensorErrc::unsupported_rank: return "unsupported_rank";
    case TensorErrc::size_overflow: return "size_overflow";
    case TensorErrc::length_mismatch: return "length_mismatch";
    case TensorErrc::non_finite: return "non_finite";
  }
  return "unknown";
}

TensorIoError::TensorIoError(TensorErrc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

std::vector<std::uint8_t> encode_tensor(const RawTensor& t) {
  if (t.dims.size() > std::numeric_limits<std::uint8_t>::max()) {
    throw TensorIoError(TensorErrc::unsupported_rank, "rank exceeds 255");
  }
  std::uint64_t count = 1;
  for (auto d : t.dims) {
    if (d != 0 && count > std::numeric_limits<std::uint64_t>::max() / d) {
      throw TensorIoError(TensorErrc::size_overflow, "extent product overflows");
    }
    count *= d;
  }
  if (count != t.values.size()) {
    throw TensorIoError(TensorErrc::length_mismatch, "values do not match extents");
  }
  require_finite(t.values);

  std::vector<std::uint8_t> out;
  out.reserve(kFixedHeader + 8 * t.dims.size() + 4 * t.values.size());
  out.insert(out.end(), std::begin(kTensorMagic), std::end(kTensorMagic));
  put_u16(out, kTensorVersion);
  out.push_back(kDtypeFloat32);
  out.push_back(static_cast<std::uint8_t>(t.dims.size()));
  for (auto d : t.dims) put_u64(out, d);
  for (float v : t.values) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
  }
  return out;
}

RawTensor decode_tensor(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kFixedHeader) {
    throw TensorIoError(TensorErrc::truncated_header, "file shorter than fixed header");
  }
  if (std::memcmp(bytes.data(), kTensorMagic, 4) != 0) {
    throw TensorIoError(TensorErrc::bad_magic, "magic is not IFSQ");
  }
  const auto version = static_cast<std::uint16_t>(bytes[4] | (bytes[5] << 8));
  if (version != kTensorVersion) {
    throw TensorIoError(TensorErrc::unsupported_version, "version " + std::to_string(version));
  }
  if (bytes[6] != kDtypeFloat32) {
    throw TensorIoError(TensorErrc::unsupported_dtype, "dtype code " + std::to_string(bytes[6]));
  }
  const std::size_t rank = bytes[7];
  const std::size_t header = kFixedHeader + 8 * rank;
  if (bytes.size() < header) {
    throw TensorIoError(TensorErrc::truncated_header, "extent list is truncated");
  }

  RawTensor t;
  t.dims.resize(rank);
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < rank; ++k) {
    t.dims[k] = get_u64(bytes.data() + kFixedHeader + 8 * k);
    if (t.dims[k] != 0 && count > std::numeric_limits<std::uint64_t>::max() / t.dims[k]) {
      throw TensorIoError(TensorErrc::size_overflow, "extent product overflows");
    }
    count *= t.dims[k];
  }
  if (count > (std::numeric_limits<std::uint64_t>::max() - header) / 4) {
    throw TensorIoError(TensorErrc::size_overflow, "payload size overflows");
  }
  if (bytes.size() - header != 4 * count) {
    throw TensorIoError(TensorErrc::length_mismatch,
                        "payload has " + std::to_string(bytes.size() - header) + " bytes, expected " +
                            std::to_string(4 * count));
  }

  t.values.resize(count);
  const std::uint8_t* p = bytes.data() + header;
  for (std::size_t i = 0; i < count; ++i, p += 4) {
    const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                               (static_cast<std::uint32_t>(p[2]) << 16) |
                               (static_cast<std::uint32_t>(p[3]) << 24);
    t.values[i] = std::bit_cast<float>(bits);
  }
  require_finite(t.values);
  return t;
}

void write_raw_tensor(const RawTensor& t, const std::filesystem::path& path) {
  const auto bytes = encode_tensor(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw TensorIoError(TensorErrc::io_failure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw TensorIoError(TensorErrc::io_failure, "write failed for " + path.string());
}

RawTensor read_raw_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TensorIoError(TensorErrc::io_failure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw TensorIoError(TensorErrc::io_failure, "read failed for " + path.string());
  return decode_tensor(bytes);
}

void write_tensor(const FeatureTensor& t, const std::filesystem::path& path) {
  RawTensor raw{{t.tokens(), t.dim()}, std::vector<float>(t.values().begin(), t.values().end())};
  write_raw_tensor(raw, path);
}

FeatureTensor read_tensor(const std::filesystem::path& path) {
  auto raw = read_raw_tensor(path);
  if (raw.dims.size() == 1) raw.dims.push_back(1);
  if (raw.dims.size() != 2) {
    throw TensorIoError(TensorErrc::unsupported_rank,
                        "feature tensors need rank 1 or 2, got " + std::to_string(raw.dims.size()));
  }
  if (raw.dims[0] == 0 || raw.dims[1] == 0) {
    throw TensorIoError(TensorErrc::length_mismatch, "feature tensor has an empty extent");
  }
  return FeatureTensor(raw.dims[0], raw.dims[1], std::move(raw.values));
}

}  // namespace ifsq

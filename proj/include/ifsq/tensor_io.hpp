#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifsq/feature_tensor.hpp"

namespace ifsq {

// File layout, all integers little-endian:
//
//   offset  size      field
//   0       4         magic "IFSQ"
//   4       2         version (u16, currently 1)
//   6       1         dtype (u8, 0 = float32)
//   7       1         rank (u8)
//   8       8 * rank  extents (u64 each)
//   ...     4 * prod  row-major float32 payload
//
// A FeatureTensor is stored with rank 2 as [tokens, dim]. Rank-1 files load
// as a single column.

inline constexpr char kTensorMagic[4] = {'I', 'F', 'S', 'Q'};
inline constexpr std::uint16_t kTensorVersion = 1;
inline constexpr std::uint8_t kDtypeFloat32 = 0;

enum class TensorErrc {
  io_failure = 1,
  truncated_header,
  bad_magic,
  unsupported_version,
  unsupported_dtype,
  unsupported_rank,
  size_overflow,
  length_mismatch,
  non_finite,
};

const char* to_string(TensorErrc code) noexcept;

class TensorIoError : public std::runtime_error {
 public:
  TensorIoError(TensorErrc code, const std::string& what);
  TensorErrc code() const noexcept { return code_; }

 private:
  TensorErrc code_;
};

/// Rank-generic contents of a tensor file.
struct RawTensor {
  std::vector<std::uint64_t> dims;
  std::vector<float> values;
};

std::vector<std::uint8_t> encode_tensor(const RawTensor& t);
/// Validates the header and length before allocating the payload.
RawTensor decode_tensor(const std::vector<std::uint8_t>& bytes);

void write_raw_tensor(const RawTensor& t, const std::filesystem::path& path);
RawTensor read_raw_tensor(const std::filesystem::path& path);

void write_tensor(const FeatureTensor& t, const std::filesystem::path& path);
FeatureTensor read_tensor(const std::filesystem::path& path);

}  // namespace ifsq

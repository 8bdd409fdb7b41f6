/**
 * Copyright 2026 The LOMA Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// Tensor file layout, all integers little-endian:
//
//   offset  size  field
//        0     8  magic "LOMATNSR"
//        8     4  version (u32, = 1)
//       12     4  ndim (u32, = 4)
//       16    32  dims B, C, H, W (u64 each)
//       48     4  dtype (u32, 1 = float32 LE)
//       52   4*N  payload, row-major, N = B*C*H*W

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "loma/errors.hpp"
#include "loma/feature.hpp"

namespace loma {

inline constexpr std::string_view kTensorMagic = "LOMATNSR";
inline constexpr std::uint32_t kTensorVersion = 1;
inline constexpr std::uint32_t kTensorRank = 4;
inline constexpr std::uint32_t kTensorDtypeF32 = 1;
inline constexpr std::size_t kTensorHeaderSize = 8 + 4 + 4 + 4 * 8 + 4;

class TensorFormatError : public std::runtime_error {
public:
  enum class Kind { BadMagic, UnsupportedVersion, UnsupportedRank, UnsupportedDtype, BadDims, Truncated };

  TensorFormatError(Kind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

namespace detail {

template <typename U> void put_le(std::vector<unsigned char> &out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<unsigned char>(value >> (8 * i)));
  }
}

template <typename U> U get_le(const unsigned char *p) {
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(p[i]) << (8 * i);
  }
  return value;
}

} // namespace detail

inline std::vector<unsigned char> encode_tensor(const FeatureMap &fm) {
  std::vector<unsigned char> out;
  out.reserve(kTensorHeaderSize + 4 * fm.element_count());
  out.insert(out.end(), kTensorMagic.begin(), kTensorMagic.end());
  detail::put_le<std::uint32_t>(out, kTensorVersion);
  detail::put_le<std::uint32_t>(out, kTensorRank);
  for (std::size_t d : {fm.batch(), fm.channels(), fm.height(), fm.width()}) {
    detail::put_le<std::uint64_t>(out, d);
  }
  detail::put_le<std::uint32_t>(out, kTensorDtypeF32);
  for (float v : fm.data()) {
    detail::put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

inline FeatureMap decode_tensor(std::span<const unsigned char> bytes) {
  using Kind = TensorFormatError::Kind;
  if (bytes.size() < kTensorMagic.size() ||
      std::memcmp(bytes.data(), kTensorMagic.data(), kTensorMagic.size()) != 0) {
    throw TensorFormatError(Kind::BadMagic, "not a tensor file (bad magic)");
  }
  if (bytes.size() < kTensorHeaderSize) {
    throw TensorFormatError(Kind::Truncated, "tensor header truncated");
  }
  const unsigned char *p = bytes.data() + 8;
  const auto version = detail::get_le<std::uint32_t>(p);
  if (version != kTensorVersion) {
    throw TensorFormatError(Kind::UnsupportedVersion,
                            "unsupported tensor version " + std::to_string(version));
  }
  const auto ndim = detail::get_le<std::uint32_t>(p + 4);
  if (ndim != kTensorRank) {
    throw TensorFormatError(Kind::UnsupportedRank, "unsupported tensor rank " + std::to_string(ndim));
  }
  std::array<std::uint64_t, 4> dims{};
  for (std::size_t i = 0; i < 4; ++i) dims[i] = detail::get_le<std::uint64_t>(p + 8 + 8 * i);
  const auto dtype = detail::get_le<std::uint32_t>(p + 40);
  if (dtype != kTensorDtypeF32) {
    throw TensorFormatError(Kind::UnsupportedDtype, "unsupported tensor dtype " + std::to_string(dtype));
  }

  std::uint64_t count = 1;
  for (std::uint64_t d : dims) {
    if (d == 0) throw TensorFormatError(Kind::BadDims, "tensor dimension is zero");
    if (count > std::numeric_limits<std::uint64_t>::max() / 4 / d) {
      throw TensorFormatError(Kind::BadDims, "tensor dimensions overflow");
    }
    count *= d;
  }
  const std::uint64_t payload = bytes.size() - kTensorHeaderSize;
  if (payload != 4 * count) {
    throw TensorFormatError(Kind::Truncated, "tensor payload holds " + std::to_string(payload) +
                                                 " bytes, dims require " + std::to_string(4 * count));
  }

  std::vector<float> values(static_cast<std::size_t>(count));
  const unsigned char *q = bytes.data() + kTensorHeaderSize;
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::bit_cast<float>(detail::get_le<std::uint32_t>(q + 4 * i));
  }
  return FeatureMap(dims[0], dims[1], dims[2], dims[3], std::move(values));
}

inline void write_tensor(const std::filesystem::path &path, const FeatureMap &fm) {
  const auto bytes = encode_tensor(fm);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

inline FeatureMap read_tensor(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  return decode_tensor(bytes);
}

} // namespace loma

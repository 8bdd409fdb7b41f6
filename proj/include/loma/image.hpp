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

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace loma {

/// Pixel storage types supported by the kernels.
template <typename T>
concept PixelValue = std::same_as<T, std::uint8_t> || std::same_as<T, float>;

/**
 * A point in the image plane.
 *
 * The frame has its origin at the bottom-left pixel, x grows to the right
 * and y grows upward. Integer coordinates address pixel centers, so pixel
 * (x, y) of a W x H image lives in storage column x and storage row H-1-y.
 */
struct PixelCoord {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PixelCoord &, const PixelCoord &) = default;
};

/// Storage row of a bottom-left-frame y coordinate.
constexpr int row_of(int y, int height) noexcept { return height - 1 - y; }

/// Bottom-left-frame y coordinate of a storage row.
constexpr int y_of(int row, int height) noexcept { return height - 1 - row; }

/**
 * Dense H x W x C pixel array stored row-major (row 0 is the top of the
 * image), channels interleaved.
 */
template <PixelValue T> class ImageBuffer {
public:
  using value_type = T;

  ImageBuffer(int width, int height, int channels, T fill = T{})
      : width_(width), height_(height), channels_(channels) {
    check_dims();
    data_.assign(pixel_count() * static_cast<std::size_t>(channels_), fill);
  }

  ImageBuffer(int width, int height, int channels, std::vector<T> data)
      : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    check_dims();
    if (data_.size() != pixel_count() * static_cast<std::size_t>(channels_)) {
      throw std::invalid_argument("image data length " + std::to_string(data_.size()) +
                                  " does not match " + std::to_string(width_) + "x" +
                                  std::to_string(height_) + "x" + std::to_string(channels_));
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::span<T> row(int r) noexcept { return {data_.data() + row_offset(r), row_stride()}; }
  std::span<const T> row(int r) const noexcept {
    return {data_.data() + row_offset(r), row_stride()};
  }

  /// Value at storage (column, row, channel).
  T &at(int col, int r, int c) noexcept { return data_[offset(col, r, c)]; }
  const T &at(int col, int r, int c) const noexcept { return data_[offset(col, r, c)]; }

  /// Value at bottom-left-frame (x, y, channel).
  const T &at_xy(int x, int y, int c) const noexcept { return at(x, row_of(y, height_), c); }

  bool contains(int col, int r) const noexcept {
    return col >= 0 && col < width_ && r >= 0 && r < height_;
  }

  friend bool operator==(const ImageBuffer &, const ImageBuffer &) = default;

private:
  void check_dims() const {
    if (width_ < 1 || height_ < 1) {
      throw std::invalid_argument("image dimensions must be at least 1x1");
    }
    if (channels_ < 1 || channels_ > 4) {
      throw std::invalid_argument("image channel count must be in [1, 4], got " +
                                  std::to_string(channels_));
    }
  }

  std::size_t row_stride() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(channels_);
  }
  std::size_t row_offset(int r) const noexcept { return static_cast<std::size_t>(r) * row_stride(); }
  std::size_t offset(int col, int r, int c) const noexcept {
    return row_offset(r) + static_cast<std::size_t>(col) * static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_;
  int height_;
  int channels_;
  std::vector<T> data_;
};

using Image8 = ImageBuffer<std::uint8_t>;
using ImageF = ImageBuffer<float>;

} // namespace loma

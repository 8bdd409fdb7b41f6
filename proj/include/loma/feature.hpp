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
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "loma/config.hpp"
#include "loma/geometry.hpp"
#include "loma/rng.hpp"
#include "loma/sampling.hpp"

namespace loma {

/// B x C x H x W float tensor, row-major in that order.
class FeatureMap {
public:
  FeatureMap(std::size_t batch, std::size_t channels, std::size_t height, std::size_t width,
             float fill = 0.0f)
      : batch_(batch), channels_(channels), height_(height), width_(width) {
    check_dims();
    data_.assign(element_count(), fill);
  }

  FeatureMap(std::size_t batch, std::size_t channels, std::size_t height, std::size_t width,
             std::vector<float> data)
      : batch_(batch), channels_(channels), height_(height), width_(width),
        data_(std::move(data)) {
    check_dims();
    if (data_.size() != element_count()) {
      throw std::invalid_argument("feature map data length " + std::to_string(data_.size()) +
                                  " does not match its dimensions");
    }
  }

  std::size_t batch() const noexcept { return batch_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t plane_size() const noexcept { return height_ * width_; }
  std::size_t element_count() const noexcept { return batch_ * channels_ * plane_size(); }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  /// The H x W plane of (b, c).
  std::span<float> slice(std::size_t b, std::size_t c) noexcept {
    return {data_.data() + (b * channels_ + c) * plane_size(), plane_size()};
  }
  std::span<const float> slice(std::size_t b, std::size_t c) const noexcept {
    return {data_.data() + (b * channels_ + c) * plane_size(), plane_size()};
  }

  /// Value at storage (b, c, row, col); row 0 is the top.
  float &at(std::size_t b, std::size_t c, std::size_t row, std::size_t col) noexcept {
    return data_[(b * channels_ + c) * plane_size() + row * width_ + col];
  }
  float at(std::size_t b, std::size_t c, std::size_t row, std::size_t col) const noexcept {
    return data_[(b * channels_ + c) * plane_size() + row * width_ + col];
  }

  friend bool operator==(const FeatureMap &, const FeatureMap &) = default;

private:
  void check_dims() const {
    if (batch_ == 0 || channels_ == 0 || height_ == 0 || width_ == 0) {
      throw std::invalid_argument("feature map dimensions must all be >= 1");
    }
    if (height_ > static_cast<std::size_t>(std::numeric_limits<int>::max()) ||
        width_ > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
      throw std::invalid_argument("feature map spatial dimensions too large");
    }
  }

  std::size_t batch_;
  std::size_t channels_;
  std::size_t height_;
  std::size_t width_;
  std::vector<float> data_;
};

/// Whole-cell translation; positive t_x moves content right, positive t_y moves it up.
struct OffsetSpec {
  int t_x = 0;
  int t_y = 0;

  friend bool operator==(const OffsetSpec &, const OffsetSpec &) = default;
};

/// Applies `spec` to every (b, c) plane with bilinear sampling.
inline FeatureMap loma_f(const FeatureMap &fm, const DeformationSpec &spec) {
  const int w = static_cast<int>(fm.width());
  const int h = static_cast<int>(fm.height());
  validate(spec, w, h);
  FeatureMap out = fm;
  for (std::size_t b = 0; b < fm.batch(); ++b) {
    for (std::size_t c = 0; c < fm.channels(); ++c) {
      const detail::PlaneView<float> src{fm.slice(b, c).data(), w, h, 1};
      detail::deform_plane(src, out.slice(b, c).data(), spec, Interp::Bilinear);
    }
  }
  return out;
}

/// Samples one spec on the H_f x W_f grid and applies it to the whole batch.
inline FeatureMap loma_f(const FeatureMap &fm, const LomaConfig &cfg, RngStream &rng) {
  validate(cfg);
  const DeformationSpec spec =
      sample_spec(rng, cfg, static_cast<int>(fm.width()), static_cast<int>(fm.height()));
  return loma_f(fm, spec);
}

/// t = round(u * 2g - g) for g = gamma * max(H_f, W_f), rounded half away from zero; x first.
inline OffsetSpec sample_offset(RngStream &rng, double gamma, std::size_t height,
                                std::size_t width) {
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw std::invalid_argument("offset fraction gamma must be finite and >= 0");
  }
  const double span = gamma * static_cast<double>(std::max(height, width));
  const auto draw = [&] {
    const double t = std::round(rng.uniform() * 2.0 * span - span);
    constexpr double limit = std::numeric_limits<int>::max();
    return static_cast<int>(std::clamp(t, -limit, limit));
  };
  OffsetSpec t;
  t.t_x = draw();
  t.t_y = draw();
  return t;
}

/**
 * Rigid shift of every plane by (t_x, t_y) in the bottom-left frame with
 * zero fill. Shifts at least as large as a dimension empty the plane.
 */
inline FeatureMap feature_offset(const FeatureMap &fm, OffsetSpec t) {
  FeatureMap out(fm.batch(), fm.channels(), fm.height(), fm.width(), 0.0f);
  const auto h = static_cast<long long>(fm.height());
  const auto w = static_cast<long long>(fm.width());
  // Storage rows run downward, so moving content up by t_y reads from row + t_y.
  const long long row_shift = t.t_y;
  const long long col_shift = -static_cast<long long>(t.t_x);
  const long long row_begin = std::clamp(-row_shift, 0LL, h);
  const long long row_end = std::clamp(h - row_shift, 0LL, h);
  const long long col_begin = std::clamp(-col_shift, 0LL, w);
  const long long col_end = std::clamp(w - col_shift, 0LL, w);
  if (row_begin >= row_end || col_begin >= col_end) return out;

  for (std::size_t b = 0; b < fm.batch(); ++b) {
    for (std::size_t c = 0; c < fm.channels(); ++c) {
      const float *src = fm.slice(b, c).data();
      float *dst = out.slice(b, c).data();
      for (long long row = row_begin; row < row_end; ++row) {
        const float *from = src + (row + row_shift) * w + (col_begin + col_shift);
        std::copy(from, from + (col_end - col_begin), dst + row * w + col_begin);
      }
    }
  }
  return out;
}

inline FeatureMap feature_offset(const FeatureMap &fm, double gamma, RngStream &rng) {
  return feature_offset(fm, sample_offset(rng, gamma, fm.height(), fm.width()));
}

struct FeatureAugResult {
  FeatureMap map;
  std::optional<DeformationSpec> spec;
  std::optional<OffsetSpec> offset;
};

/**
 * Batch-level gate: one draw u; if u < p_f, magnify (loma_f) and then
 * offset, both drawing from the same stream. Otherwise identity.
 */
inline FeatureAugResult feature_augment(const FeatureMap &fm, const LomaConfig &lcfg,
                                        const FeatureAugConfig &fcfg, RngStream &rng) {
  validate(lcfg);
  validate(fcfg);
  if (rng.uniform() >= fcfg.p_f) return {fm, std::nullopt, std::nullopt};
  const DeformationSpec spec =
      sample_spec(rng, lcfg, static_cast<int>(fm.width()), static_cast<int>(fm.height()));
  FeatureMap magnified = loma_f(fm, spec);
  const OffsetSpec t = sample_offset(rng, fcfg.gamma, fm.height(), fm.width());
  return {feature_offset(magnified, t), spec, t};
}

} // namespace loma

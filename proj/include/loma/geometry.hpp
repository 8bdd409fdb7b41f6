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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "loma/image.hpp"

namespace loma {

/// Unit shape of the magnified region before axis compression.
enum class Shape { Rhombus, Ellipse };

/// How fractional source positions are read.
enum class Interp { Nearest, Bilinear };

constexpr std::string_view to_string(Shape s) noexcept {
  return s == Shape::Rhombus ? "rhombus" : "ellipse";
}

constexpr std::string_view to_string(Interp i) noexcept {
  return i == Interp::Nearest ? "nearest" : "bilinear";
}

inline std::optional<Shape> parse_shape(std::string_view s) noexcept {
  if (s == "rhombus") return Shape::Rhombus;
  if (s == "ellipse") return Shape::Ellipse;
  return std::nullopt;
}

inline std::optional<Interp> parse_interp(std::string_view s) noexcept {
  if (s == "nearest") return Interp::Nearest;
  if (s == "bilinear") return Interp::Bilinear;
  return std::nullopt;
}

/**
 * One fully resolved magnification event: center, radius, preset shape and
 * the per-axis compression ratios.
 *
 * Pixels p with a_x|dx| + a_y|dy| < r (rhombus) or a_x dx^2 + a_y dy^2 < r^2
 * (ellipse) are rewritten; everything else is left untouched.
 */
struct DeformationSpec {
  PixelCoord center;
  double radius = 1.0;
  Shape shape = Shape::Rhombus;
  double a_x = 1.0;
  double a_y = 1.0;

  friend bool operator==(const DeformationSpec &, const DeformationSpec &) = default;
};

namespace detail {

inline bool inside(double dx, double dy, const DeformationSpec &spec) noexcept {
  if (spec.shape == Shape::Rhombus) {
    return spec.a_x * std::abs(dx) + spec.a_y * std::abs(dy) < spec.radius;
  }
  return spec.a_x * (dx * dx) + spec.a_y * (dy * dy) < spec.radius * spec.radius;
}

// Radial pull toward the center: the source sits at distance d^2/r along the
// same ray as the target.
inline PixelCoord source_of(double dx, double dy, const DeformationSpec &spec) noexcept {
  const double d = std::sqrt(dx * dx + dy * dy);
  const double scale = d / spec.radius;
  return {scale * dx + spec.center.x, scale * dy + spec.center.y};
}

} // namespace detail

/// Membership of p in the deformation region (strict inequality).
inline bool region_contains(PixelCoord p, const DeformationSpec &spec) noexcept {
  return detail::inside(p.x - spec.center.x, p.y - spec.center.y, spec);
}

/// Source position read for target p. Throws std::domain_error if p is not in the region.
inline PixelCoord map_source(PixelCoord p, const DeformationSpec &spec) {
  const double dx = p.x - spec.center.x;
  const double dy = p.y - spec.center.y;
  if (!detail::inside(dx, dy, spec)) {
    throw std::domain_error("map_source: point lies outside the deformation region");
  }
  return detail::source_of(dx, dy, spec);
}

/**
 * Throws std::invalid_argument unless the spec can be applied to a
 * width x height image: finite values, r > 0, both ratios >= 1 and the
 * center inside [0, W-1] x [0, H-1].
 */
inline void validate(const DeformationSpec &spec, int width, int height) {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(spec.center.x) || !finite(spec.center.y) || !finite(spec.radius) ||
      !finite(spec.a_x) || !finite(spec.a_y)) {
    throw std::invalid_argument("deformation spec has non-finite fields");
  }
  if (spec.radius <= 0.0) {
    throw std::invalid_argument("deformation radius must be positive");
  }
  if (spec.a_x < 1.0 || spec.a_y < 1.0) {
    throw std::invalid_argument("compression ratios must be >= 1 (a_x=" +
                                std::to_string(spec.a_x) + ", a_y=" + std::to_string(spec.a_y) +
                                ")");
  }
  if (spec.center.x < 0.0 || spec.center.x > width - 1 || spec.center.y < 0.0 ||
      spec.center.y > height - 1) {
    throw std::invalid_argument("deformation center (" + std::to_string(spec.center.x) + ", " +
                                std::to_string(spec.center.y) + ") lies outside the " +
                                std::to_string(width) + "x" + std::to_string(height) + " image");
  }
}

/// Full invariant check used on sampled specs; also requires one ratio to be exactly 1.
inline bool is_well_formed(const DeformationSpec &spec, int width, int height) noexcept {
  try {
    validate(spec, width, height);
  } catch (const std::invalid_argument &) {
    return false;
  }
  return spec.a_x == 1.0 || spec.a_y == 1.0;
}

namespace detail {

template <PixelValue T> struct PlaneView {
  const T *data;
  int width;
  int height;
  int channels;

  const T *pixel(int col, int row) const noexcept {
    return data + (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(col)) *
                      static_cast<std::size_t>(channels);
  }
};

template <PixelValue T> T from_real(double v) noexcept {
  if constexpr (std::is_same_v<T, std::uint8_t>) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
  } else {
    return static_cast<float>(v);
  }
}

// `at` must lie inside [0, W-1] x [0, H-1] in the bottom-left frame.
template <PixelValue T>
void sample_into(const PlaneView<T> &src, PixelCoord at, Interp interp, T *out) noexcept {
  if (interp == Interp::Nearest) {
    const int x = static_cast<int>(std::floor(at.x + 0.5));
    const int y = static_cast<int>(std::floor(at.y + 0.5));
    const T *p = src.pixel(x, row_of(y, src.height));
    std::copy(p, p + src.channels, out);
    return;
  }
  const double fx0 = std::floor(at.x);
  const double fy0 = std::floor(at.y);
  const int x0 = static_cast<int>(fx0);
  const int y0 = static_cast<int>(fy0);
  const double tx = at.x - fx0;
  const double ty = at.y - fy0;
  const int x1 = std::min(x0 + 1, src.width - 1);
  const int y1 = std::min(y0 + 1, src.height - 1);
  const T *p00 = src.pixel(x0, row_of(y0, src.height));
  const T *p10 = src.pixel(x1, row_of(y0, src.height));
  const T *p01 = src.pixel(x0, row_of(y1, src.height));
  const T *p11 = src.pixel(x1, row_of(y1, src.height));
  const double w00 = (1.0 - tx) * (1.0 - ty);
  const double w10 = tx * (1.0 - ty);
  const double w01 = (1.0 - tx) * ty;
  const double w11 = tx * ty;
  for (int c = 0; c < src.channels; ++c) {
    const double v = w00 * static_cast<double>(p00[c]) + w10 * static_cast<double>(p10[c]) +
                     w01 * static_cast<double>(p01[c]) + w11 * static_cast<double>(p11[c]);
    out[c] = from_real<T>(v);
  }
}

// Rewrites the region pixels of `dst`, which must already hold a copy of `src`.
// All reads go to `src`.
template <PixelValue T>
void deform_plane(const PlaneView<T> &src, T *dst, const DeformationSpec &spec, Interp interp) {
  const double r = spec.radius;
  const double half_x = spec.shape == Shape::Rhombus ? r / spec.a_x : r / std::sqrt(spec.a_x);
  const double half_y = spec.shape == Shape::Rhombus ? r / spec.a_y : r / std::sqrt(spec.a_y);
  const auto lo = [](double v) { return static_cast<int>(std::max(std::floor(v) - 1.0, 0.0)); };
  const auto hi = [](double v, int limit) {
    return static_cast<int>(std::min(std::ceil(v) + 1.0, static_cast<double>(limit)));
  };
  const int x_lo = lo(spec.center.x - half_x);
  const int x_hi = hi(spec.center.x + half_x, src.width - 1);
  const int y_lo = lo(spec.center.y - half_y);
  const int y_hi = hi(spec.center.y + half_y, src.height - 1);

  const std::size_t row_len =
      static_cast<std::size_t>(src.width) * static_cast<std::size_t>(src.channels);
  for (int y = y_lo; y <= y_hi; ++y) {
    T *out_row = dst + static_cast<std::size_t>(row_of(y, src.height)) * row_len;
    const double dy = y - spec.center.y;
    for (int x = x_lo; x <= x_hi; ++x) {
      const double dx = x - spec.center.x;
      if (!inside(dx, dy, spec)) continue;
      sample_into(src, source_of(dx, dy, spec), interp,
                  out_row + static_cast<std::size_t>(x) * static_cast<std::size_t>(src.channels));
    }
  }
}

template <PixelValue T> PlaneView<T> view_of(const ImageBuffer<T> &img) noexcept {
  return {img.data().data(), img.width(), img.height(), img.channels()};
}

} // namespace detail

/**
 * Reads `img` at a bottom-left-frame position.
 *
 * Nearest picks (floor(x+0.5), floor(y+0.5)); Bilinear blends the four
 * neighbours and, for 8-bit images, rounds half up and clamps to [0, 255].
 * Throws std::out_of_range outside [0, W-1] x [0, H-1].
 */
template <PixelValue T>
std::vector<T> sample(const ImageBuffer<T> &img, PixelCoord at, Interp interp) {
  if (!(at.x >= 0.0 && at.x <= img.width() - 1 && at.y >= 0.0 && at.y <= img.height() - 1)) {
    throw std::out_of_range("sample position outside image bounds");
  }
  std::vector<T> out(static_cast<std::size_t>(img.channels()));
  detail::sample_into(detail::view_of(img), at, interp, out.data());
  return out;
}

/**
 * Applies one magnification event to a copy of `img`.
 *
 * Pixels outside the region are copied bit-exactly; pixels inside take the
 * value sampled at map_source(p). The region may overhang the border, in
 * which case only in-image pixels are visited.
 */
template <PixelValue T>
ImageBuffer<T> apply_deformation(const ImageBuffer<T> &img, const DeformationSpec &spec,
                                 Interp interp) {
  validate(spec, img.width(), img.height());
  ImageBuffer<T> out = img;
  detail::deform_plane(detail::view_of(img), out.data().data(), spec, interp);
  return out;
}

} // namespace loma

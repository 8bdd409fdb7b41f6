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

// Naive reference implementations used only by tests. Only the data types
// are shared with the library; every formula is written out again here.

#include <cmath>
#include <cstdint>
#include <vector>

#include "loma/feature.hpp"
#include "loma/geometry.hpp"
#include "loma/image.hpp"

namespace loma::oracle {

// Raw storage index of bottom-left-frame (x, y, c).
template <typename T>
std::size_t index_of(const ImageBuffer<T> &img, long x, long y, long c) {
  const long row = img.height() - 1 - y;
  return static_cast<std::size_t>((row * img.width() + x) * img.channels() + c);
}

template <typename T>
double read(const ImageBuffer<T> &img, long x, long y, long c) {
  return static_cast<double>(img.data()[index_of(img, x, y, c)]);
}

inline bool in_region(double x, double y, const DeformationSpec &s) {
  const double xc = s.center.x, yc = s.center.y;
  if (s.shape == Shape::Rhombus) {
    return s.a_x * std::fabs(x - xc) + s.a_y * std::fabs(y - yc) < s.radius;
  }
  return s.a_x * ((x - xc) * (x - xc)) + s.a_y * ((y - yc) * (y - yc)) < s.radius * s.radius;
}

template <typename T> T store(double v) {
  if constexpr (std::is_same_v<T, std::uint8_t>) {
    double q = std::floor(v + 0.5);
    if (q < 0.0) q = 0.0;
    if (q > 255.0) q = 255.0;
    return static_cast<std::uint8_t>(q);
  } else {
    return static_cast<float>(v);
  }
}

/// Visits every pixel of the image, tests membership, and reads I[x_o, y_o].
template <typename T>
ImageBuffer<T> oracle_apply(const ImageBuffer<T> &in, const DeformationSpec &s, Interp interp) {
  ImageBuffer<T> out = in;
  const long W = in.width(), H = in.height(), C = in.channels();
  for (long yi = 0; yi < H; ++yi) {
    for (long xi = 0; xi < W; ++xi) {
      const double x = static_cast<double>(xi);
      const double y = static_cast<double>(yi);
      if (!in_region(x, y, s)) continue;
      const double xc = s.center.x, yc = s.center.y;
      const double d = std::sqrt((x - xc) * (x - xc) + (y - yc) * (y - yc));
      const double xo = (d / s.radius) * (x - xc) + xc;
      const double yo = (d / s.radius) * (y - yc) + yc;
      for (long c = 0; c < C; ++c) {
        double v;
        if (interp == Interp::Nearest) {
          const long sx = static_cast<long>(std::floor(xo + 0.5));
          const long sy = static_cast<long>(std::floor(yo + 0.5));
          v = read(in, sx, sy, c);
        } else {
          const long x0 = static_cast<long>(std::floor(xo));
          const long y0 = static_cast<long>(std::floor(yo));
          const long x1 = x0 + 1 < W ? x0 + 1 : W - 1;
          const long y1 = y0 + 1 < H ? y0 + 1 : H - 1;
          const double fx = xo - std::floor(xo);
          const double fy = yo - std::floor(yo);
          v = (1.0 - fx) * (1.0 - fy) * read(in, x0, y0, c) + fx * (1.0 - fy) * read(in, x1, y0, c) +
              (1.0 - fx) * fy * read(in, x0, y1, c) + fx * fy * read(in, x1, y1, c);
        }
        out.data()[index_of(out, xi, yi, c)] = store<T>(v);
      }
    }
  }
  return out;
}

/// out(x, y) = in(x - t_x, y - t_y) when that cell exists, else 0.
inline FeatureMap oracle_offset(const FeatureMap &in, int t_x, int t_y) {
  FeatureMap out(in.batch(), in.channels(), in.height(), in.width(), 0.0f);
  const long H = static_cast<long>(in.height()), W = static_cast<long>(in.width());
  for (std::size_t b = 0; b < in.batch(); ++b) {
    for (std::size_t c = 0; c < in.channels(); ++c) {
      for (long y = 0; y < H; ++y) {
        for (long x = 0; x < W; ++x) {
          const long sx = x - t_x;
          const long sy = y - t_y;
          float v = 0.0f;
          if (sx >= 0 && sx < W && sy >= 0 && sy < H) {
            v = in.at(b, c, static_cast<std::size_t>(H - 1 - sy), static_cast<std::size_t>(sx));
          }
          out.at(b, c, static_cast<std::size_t>(H - 1 - y), static_cast<std::size_t>(x)) = v;
        }
      }
    }
  }
  return out;
}

/// Per-plane oracle_apply in bilinear mode.
inline FeatureMap oracle_loma_f(const FeatureMap &in, const DeformationSpec &s) {
  FeatureMap out = in;
  const int H = static_cast<int>(in.height()), W = static_cast<int>(in.width());
  for (std::size_t b = 0; b < in.batch(); ++b) {
    for (std::size_t c = 0; c < in.channels(); ++c) {
      const auto plane = in.slice(b, c);
      ImageF img(W, H, 1, std::vector<float>(plane.begin(), plane.end()));
      const ImageF res = oracle_apply(img, s, Interp::Bilinear);
      std::copy(res.data().begin(), res.data().end(), out.slice(b, c).begin());
    }
  }
  return out;
}

} // namespace loma::oracle

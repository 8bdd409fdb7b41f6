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

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "loma/geometry.hpp"
#include "loma/image.hpp"
#include "loma/rng.hpp"
#include "loma/sampling.hpp"

namespace loma {

/// Variant k is maybe_augment with p forced to 1 on stream for_item(seed, k).
inline std::vector<AugmentResult<std::uint8_t>> preview_variants(const Image8 &img, LomaConfig cfg,
                                                                 std::uint64_t seed, int count) {
  cfg.p = 1.0;
  std::vector<AugmentResult<std::uint8_t>> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    RngStream rng = RngStream::for_item(seed, static_cast<std::uint64_t>(k));
    out.push_back(maybe_augment(img, cfg, rng));
  }
  return out;
}

/// True for region pixels with a 4-neighbour outside the region or the image.
inline bool on_region_outline(int x, int y, const DeformationSpec &spec, int width, int height) {
  const auto member = [&](int px, int py) {
    return px >= 0 && px < width && py >= 0 && py < height &&
           region_contains({static_cast<double>(px), static_cast<double>(py)}, spec);
  };
  if (!member(x, y)) return false;
  return !member(x - 1, y) || !member(x + 1, y) || !member(x, y - 1) || !member(x, y + 1);
}

/**
 * Marks the outline of the deformed region: each outline pixel becomes
 * white on dark content and black on light content; alpha is made opaque.
 */
inline void draw_region_outline(Image8 &img, const DeformationSpec &spec) {
  const int colour_channels = img.channels() == 2 || img.channels() == 4 ? img.channels() - 1
                                                                         : img.channels();
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!on_region_outline(x, y, spec, img.width(), img.height())) continue;
      const int row = row_of(y, img.height());
      int sum = 0;
      for (int c = 0; c < colour_channels; ++c) sum += img.at(x, row, c);
      const std::uint8_t mark = sum < 128 * colour_channels ? 255 : 0;
      for (int c = 0; c < colour_channels; ++c) img.at(x, row, c) = mark;
      if (colour_channels != img.channels()) img.at(x, row, colour_channels) = 255;
    }
  }
}

/// Row-major tiling with ceil(sqrt(K)) columns; unused cells stay black.
inline Image8 make_grid(std::span<const Image8> tiles) {
  if (tiles.empty()) throw std::invalid_argument("make_grid needs at least one tile");
  const int w = tiles.front().width();
  const int h = tiles.front().height();
  const int ch = tiles.front().channels();
  for (const auto &t : tiles) {
    if (t.width() != w || t.height() != h || t.channels() != ch) {
      throw std::invalid_argument("make_grid tiles must share dimensions");
    }
  }
  const int k = static_cast<int>(tiles.size());
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k))));
  const int rows = (k + cols - 1) / cols;
  Image8 grid(w * cols, h * rows, ch);
  for (int i = 0; i < k; ++i) {
    const int ox = (i % cols) * w;
    const int oy = (i / cols) * h;
    for (int r = 0; r < h; ++r) {
      const auto src = tiles[static_cast<std::size_t>(i)].row(r);
      std::copy(src.begin(), src.end(),
                grid.row(oy + r).begin() + static_cast<std::ptrdiff_t>(ox) * ch);
    }
  }
  return grid;
}

} // namespace loma

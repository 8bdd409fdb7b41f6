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

#include "loma/config.hpp"
#include "loma/geometry.hpp"
#include "loma/image.hpp"
#include "loma/rng.hpp"

namespace loma {

/// Draws consumed by sample_spec.
inline constexpr int kSpecDraws = 5;

/**
 * Samples one magnification event for a width x height image.
 *
 * Draw order is fixed: center x, center y, radius, axis coin, ratio. The
 * center is an integer pixel anywhere in the image; the radius is a
 * fraction of max(W, H); the coin (> 0.5 picks a_x) decides which axis
 * gets the random ratio while the other stays 1. The config is assumed
 * valid.
 */
inline DeformationSpec sample_spec(RngStream &rng, const LomaConfig &cfg, int width, int height) {
  const double u_x = rng.uniform();
  const double u_y = rng.uniform();
  const double u_r = rng.uniform();
  const double u_coin = rng.uniform();
  const double u_ratio = rng.uniform();

  DeformationSpec spec;
  spec.center.x = std::min(std::floor(u_x * width), static_cast<double>(width - 1));
  spec.center.y = std::min(std::floor(u_y * height), static_cast<double>(height - 1));
  spec.radius = (cfg.r_min + u_r * (cfg.r_max - cfg.r_min)) * std::max(width, height);
  spec.shape = cfg.shape;
  const double ratio = cfg.a_min + u_ratio * (cfg.a_max - cfg.a_min);
  if (u_coin > 0.5) {
    spec.a_x = ratio;
    spec.a_y = 1.0;
  } else {
    spec.a_x = 1.0;
    spec.a_y = ratio;
  }
  return spec;
}

template <PixelValue T> struct AugmentResult {
  ImageBuffer<T> image;
  std::optional<DeformationSpec> spec;
};

/**
 * Probability-gated magnification. One gate draw u is always consumed; if
 * u >= p the input comes back unchanged, otherwise a spec is sampled and
 * applied with cfg.interp.
 */
template <PixelValue T>
AugmentResult<T> maybe_augment(const ImageBuffer<T> &img, const LomaConfig &cfg, RngStream &rng) {
  validate(cfg);
  if (rng.uniform() >= cfg.p) return {img, std::nullopt};
  const DeformationSpec spec = sample_spec(rng, cfg, img.width(), img.height());
  return {apply_deformation(img, spec, cfg.interp), spec};
}

} // namespace loma

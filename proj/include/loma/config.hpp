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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "loma/errors.hpp"
#include "loma/geometry.hpp"

namespace loma {

/// Stochastic policy for image-space magnification.
struct LomaConfig {
  double p = 0.5;
  Shape shape = Shape::Rhombus;
  double r_min = 0.03;
  double r_max = 0.7;
  double a_min = 1.0;
  double a_max = 3.0;
  Interp interp = Interp::Bilinear;

  friend bool operator==(const LomaConfig &, const LomaConfig &) = default;
};

/// Feature-space policy: gate probability, offset fraction and the source block tag.
struct FeatureAugConfig {
  double p_f = 0.5;
  double gamma = 0.25;
  // Informational only. Block 2 was the best hook point in the CIFAR ablation.
  int block_index = 2;

  friend bool operator==(const FeatureAugConfig &, const FeatureAugConfig &) = default;
};

struct Config {
  LomaConfig image;
  FeatureAugConfig feature;

  friend bool operator==(const Config &, const Config &) = default;
};

inline void validate(const LomaConfig &cfg) {
  const auto require_finite = [](const char *key, double v) {
    if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
  };
  require_finite("p", cfg.p);
  require_finite("r_min", cfg.r_min);
  require_finite("r_max", cfg.r_max);
  require_finite("a_min", cfg.a_min);
  require_finite("a_max", cfg.a_max);
  if (cfg.p < 0.0 || cfg.p > 1.0) {
    throw ConfigError("p", "must lie in [0, 1], got " + std::to_string(cfg.p));
  }
  if (cfg.r_min <= 0.0) {
    throw ConfigError("r_min", "must be positive, got " + std::to_string(cfg.r_min));
  }
  if (cfg.r_min > cfg.r_max) {
    throw ConfigError("r_min", "must not exceed r_max (" + std::to_string(cfg.r_min) + " > " +
                                   std::to_string(cfg.r_max) + ")");
  }
  if (cfg.a_min < 1.0) {
    throw ConfigError("a_min", "must be >= 1, got " + std::to_string(cfg.a_min));
  }
  if (cfg.a_min > cfg.a_max) {
    throw ConfigError("a_min", "must not exceed a_max (" + std::to_string(cfg.a_min) + " > " +
                                   std::to_string(cfg.a_max) + ")");
  }
}

inline void validate(const FeatureAugConfig &cfg) {
  if (!std::isfinite(cfg.p_f) || cfg.p_f < 0.0 || cfg.p_f > 1.0) {
    throw ConfigError("feature.p_f", "must lie in [0, 1], got " + std::to_string(cfg.p_f));
  }
  if (!std::isfinite(cfg.gamma) || cfg.gamma < 0.0) {
    throw ConfigError("feature.gamma", "must be finite and >= 0, got " + std::to_string(cfg.gamma));
  }
  if (cfg.block_index < 0) {
    throw ConfigError("feature.block_index", "must be >= 0");
  }
}

inline void validate(const Config &cfg) {
  validate(cfg.image);
  validate(cfg.feature);
}

/**
 * Named hyper-parameter sets: "cifar" (the defaults), "imagenet" (p = 0.8)
 * and "detection" (p = 0.25, r_max = 0.5, a_max = 1).
 */
inline Config preset(std::string_view name) {
  Config cfg;
  if (name == "cifar") return cfg;
  if (name == "imagenet") {
    cfg.image.p = 0.8;
    return cfg;
  }
  if (name == "detection") {
    cfg.image.p = 0.25;
    cfg.image.r_max = 0.5;
    cfg.image.a_max = 1.0;
    return cfg;
  }
  throw ConfigError("preset", "unknown preset '" + std::string(name) +
                                  "' (expected cifar, imagenet or detection)");
}

namespace detail {

inline double number_at(const nlohmann::json &node, const std::string &key) {
  if (!node.is_number()) throw ConfigError(key, "must be a number");
  return node.get<double>();
}

inline std::string string_at(const nlohmann::json &node, const std::string &key) {
  if (!node.is_string()) throw ConfigError(key, "must be a string");
  return node.get<std::string>();
}

inline void apply_feature_section(const nlohmann::json &section, FeatureAugConfig &out) {
  if (!section.is_object()) throw ConfigError("feature", "must be an object");
  for (const auto &[key, value] : section.items()) {
    const std::string path = "feature." + key;
    if (key == "p_f") {
      out.p_f = number_at(value, path);
    } else if (key == "gamma") {
      out.gamma = number_at(value, path);
    } else if (key == "block_index") {
      if (!value.is_number_integer()) throw ConfigError(path, "must be an integer");
      out.block_index = value.get<int>();
    } else if (key == "per") {
      if (string_at(value, path) != "batch") {
        throw ConfigError(path, "only \"batch\" is supported");
      }
    } else {
      throw ConfigError(path, "unknown key");
    }
  }
}

} // namespace detail

/**
 * Parses a JSON config document. Absent keys keep their defaults (or the
 * values of the optional "preset" key); unknown keys are rejected. An empty
 * document yields the defaults. The result is validated.
 */
inline Config parse_config(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return Config{};

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError("", std::string("malformed config document: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "config document must be a JSON object");

  Config cfg;
  if (auto it = doc.find("preset"); it != doc.end()) {
    cfg = preset(detail::string_at(*it, "preset"));
  }
  for (const auto &[key, value] : doc.items()) {
    if (key == "preset") continue;
    if (key == "p") {
      cfg.image.p = detail::number_at(value, key);
    } else if (key == "r_min") {
      cfg.image.r_min = detail::number_at(value, key);
    } else if (key == "r_max") {
      cfg.image.r_max = detail::number_at(value, key);
    } else if (key == "a_min") {
      cfg.image.a_min = detail::number_at(value, key);
    } else if (key == "a_max") {
      cfg.image.a_max = detail::number_at(value, key);
    } else if (key == "shape") {
      const auto name = detail::string_at(value, key);
      const auto shape = parse_shape(name);
      if (!shape) throw ConfigError(key, "unknown shape '" + name + "'");
      cfg.image.shape = *shape;
    } else if (key == "interp") {
      const auto name = detail::string_at(value, key);
      const auto interp = parse_interp(name);
      if (!interp) throw ConfigError(key, "unknown interpolation '" + name + "'");
      cfg.image.interp = *interp;
    } else if (key == "feature") {
      detail::apply_feature_section(value, cfg.feature);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  validate(cfg);
  return cfg;
}

/// Reads and parses a config file. Throws IoError if it cannot be read.
inline Config load_config(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

inline nlohmann::json to_json(const LomaConfig &cfg) {
  return {{"p", cfg.p},
          {"shape", to_string(cfg.shape)},
          {"r_min", cfg.r_min},
          {"r_max", cfg.r_max},
          {"a_min", cfg.a_min},
          {"a_max", cfg.a_max},
          {"interp", to_string(cfg.interp)}};
}

inline nlohmann::json to_json(const FeatureAugConfig &cfg) {
  return {{"p_f", cfg.p_f}, {"gamma", cfg.gamma}, {"per", "batch"}, {"block_index", cfg.block_index}};
}

/// Serialises to the same document shape parse_config accepts.
inline nlohmann::json to_json(const Config &cfg) {
  auto doc = to_json(cfg.image);
  doc["feature"] = to_json(cfg.feature);
  return doc;
}

} // namespace loma

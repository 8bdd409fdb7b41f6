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

// Line-delimited JSON records emitted by the batch runner and the CLI.

#include <optional>
#include <ostream>

#include "json.hpp"

#include "loma/config.hpp"
#include "loma/feature.hpp"
#include "loma/geometry.hpp"
#include "loma/pipeline.hpp"

namespace loma {

inline nlohmann::json to_json(const DeformationSpec &spec) {
  return {{"x_c", spec.center.x}, {"y_c", spec.center.y}, {"r", spec.radius},
          {"shape", to_string(spec.shape)}, {"a_x", spec.a_x}, {"a_y", spec.a_y}};
}

inline nlohmann::json to_json(const OffsetSpec &t) { return {{"t_x", t.t_x}, {"t_y", t.t_y}}; }

inline nlohmann::json to_json(const std::optional<DeformationSpec> &spec) {
  return spec ? to_json(*spec) : nlohmann::json(nullptr);
}

/// Inverse of to_json(DeformationSpec); throws ConfigError on malformed records.
inline DeformationSpec spec_from_json(const nlohmann::json &j) {
  try {
    DeformationSpec spec;
    spec.center.x = j.at("x_c").get<double>();
    spec.center.y = j.at("y_c").get<double>();
    spec.radius = j.at("r").get<double>();
    const auto shape = parse_shape(j.at("shape").get<std::string>());
    if (!shape) throw ConfigError("shape", "unknown shape");
    spec.shape = *shape;
    spec.a_x = j.at("a_x").get<double>();
    spec.a_y = j.at("a_y").get<double>();
    return spec;
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError("spec", e.what());
  }
}

inline nlohmann::json header_record(const RunReport &report) {
  return {{"record", "header"},
          {"seed", report.seed},
          {"config", to_json(report.config)},
          {"items", report.items.size()}};
}

inline nlohmann::json item_record(const ItemRecord &item) {
  nlohmann::json j = {{"record", "item"},
                      {"index", item.index},
                      {"path", item.name},
                      {"applied", item.applied},
                      {"spec", to_json(item.spec)},
                      {"ms", item.ms}};
  if (item.error) j["error"] = *item.error;
  return j;
}

inline nlohmann::json summary_record(const RunReport &report) {
  return {{"record", "summary"},
          {"applied", report.applied_count()},
          {"failed", report.failed_count()},
          {"workers", report.workers},
          {"seconds", report.seconds},
          {"images_per_s", report.images_per_second()}};
}

/// Header, one record per item in index order, then the summary.
inline void write_report(std::ostream &out, const RunReport &report) {
  out << header_record(report).dump() << '\n';
  for (const auto &item : report.items) out << item_record(item).dump() << '\n';
  out << summary_record(report).dump() << '\n';
}

} // namespace loma

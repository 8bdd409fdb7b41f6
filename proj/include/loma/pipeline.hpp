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
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "loma/config.hpp"
#include "loma/errors.hpp"
#include "loma/image_io.hpp"
#include "loma/rng.hpp"
#include "loma/sampling.hpp"

namespace loma {

/**
 * Calls fn(i) for every i in [0, count) on a fixed pool of `workers`
 * threads that pull indices from a shared counter. The first exception
 * thrown by any call is rethrown after all threads have joined.
 */
template <typename Fn> void parallel_for(std::size_t count, unsigned workers, Fn &&fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// One image of a batch run. `index` selects the RNG stream.
struct WorkItem {
  std::size_t index = 0;
  std::filesystem::path source;
  std::filesystem::path sink;
};

inline bool is_image_path(const std::filesystem::path &path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

/**
 * Lists the .png/.jpg/.jpeg files directly inside `input_dir`, sorted by
 * path, and assigns indices in that order. Each output is `<stem>.png`;
 * if that name is already taken the full input filename gets ".png"
 * appended instead.
 */
inline std::vector<WorkItem> plan_work(const std::filesystem::path &input_dir,
                                       const std::filesystem::path &output_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(input_dir, ec)) {
    throw IoError("input directory " + input_dir.string() + " does not exist");
  }
  std::vector<fs::path> sources;
  for (const auto &entry : fs::directory_iterator(input_dir)) {
    if (entry.is_regular_file() && is_image_path(entry.path())) sources.push_back(entry.path());
  }
  if (sources.empty()) {
    throw IoError("input directory " + input_dir.string() + " contains no PNG/JPEG files");
  }
  std::sort(sources.begin(), sources.end());

  std::vector<WorkItem> items;
  std::set<std::string> taken;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    std::string name = sources[i].stem().string() + ".png";
    if (!taken.insert(name).second) {
      name = sources[i].filename().string() + ".png";
      taken.insert(name);
    }
    items.push_back({i, sources[i], output_dir / name});
  }
  return items;
}

struct ItemRecord {
  std::size_t index = 0;
  std::string name;
  bool applied = false;
  std::optional<DeformationSpec> spec;
  double ms = 0.0;
  std::optional<std::string> error;
};

struct RunReport {
  LomaConfig config;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::vector<ItemRecord> items;
  double seconds = 0.0;

  std::size_t applied_count() const {
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [](const ItemRecord &r) { return r.applied; }));
  }
  std::size_t failed_count() const {
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [](const ItemRecord &r) { return r.error.has_value(); }));
  }
  double images_per_second() const {
    return seconds > 0.0 ? static_cast<double>(items.size() - failed_count()) / seconds : 0.0;
  }
};

/**
 * Augments every image in `input_dir` with maybe_augment, using stream
 * RngStream::for_item(seed, index), and writes PNGs into `output_dir`.
 *
 * Output bytes and the per-item records depend only on the inputs, the
 * config and the seed, never on `workers`. Decode and write failures are
 * recorded per item; a missing or empty input directory throws IoError.
 */
inline RunReport run_batch(const std::filesystem::path &input_dir,
                           const std::filesystem::path &output_dir, const LomaConfig &cfg,
                           std::uint64_t seed, unsigned workers) {
  validate(cfg);
  const auto items = plan_work(input_dir, output_dir);
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + output_dir.string() + ": " + ec.message());

  RunReport report;
  report.config = cfg;
  report.seed = seed;
  report.workers = std::max(1u, workers);
  report.items.reserve(items.size());
  std::mutex report_mutex;

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  parallel_for(items.size(), report.workers, [&](std::size_t i) {
    const WorkItem &item = items[i];
    const auto t0 = clock::now();
    ItemRecord record;
    record.index = item.index;
    record.name = item.source.filename().string();
    try {
      const Image8 input = read_image(item.source);
      RngStream rng = RngStream::for_item(seed, item.index);
      auto result = maybe_augment(input, cfg, rng);
      record.applied = result.spec.has_value();
      record.spec = result.spec;
      write_png(item.sink, result.image);
    } catch (const std::exception &e) {
      record.applied = false;
      record.spec.reset();
      record.error = e.what();
    }
    record.ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    std::lock_guard lock(report_mutex);
    report.items.push_back(std::move(record));
  });
  report.seconds = std::chrono::duration<double>(clock::now() - start).count();

  std::sort(report.items.begin(), report.items.end(),
            [](const ItemRecord &a, const ItemRecord &b) { return a.index < b.index; });
  return report;
}

/// In-memory counterpart of run_batch: image i uses stream for_item(seed, i).
template <PixelValue T>
std::vector<AugmentResult<T>> augment_images(std::span<const ImageBuffer<T>> images,
                                             const LomaConfig &cfg, std::uint64_t seed,
                                             unsigned workers) {
  validate(cfg);
  std::vector<std::optional<AugmentResult<T>>> slots(images.size());
  parallel_for(images.size(), workers, [&](std::size_t i) {
    RngStream rng = RngStream::for_item(seed, i);
    slots[i] = maybe_augment(images[i], cfg, rng);
  });
  std::vector<AugmentResult<T>> out;
  out.reserve(slots.size());
  for (auto &slot : slots) out.push_back(std::move(*slot));
  return out;
}

} // namespace loma

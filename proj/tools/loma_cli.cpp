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

// Command-line driver: augment, preview, feature, sample, bench.
// Structured output goes to stdout as one JSON object per line; diagnostics
// go to stderr. Exit codes: 0 ok, 1 usage, 2 I/O, 3 validation.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "loma/loma.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kValidation = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t> &flag) {
  if (flag) return *flag;
  if (const char *env = std::getenv("LOMA_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return value;
    } catch (const std::exception &) {
    }
    throw UsageError(std::string("LOMA_SEED is not an unsigned integer: ") + env);
  }
  return 0;
}

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

void emit(const json &record) { std::cout << record.dump() << '\n'; }

// ---------------------------------------------------------------------------

struct AugmentArgs {
  std::string in, out, config, preset;
  std::optional<std::uint64_t> seed;
  unsigned jobs = default_jobs();
};

int run_augment(const AugmentArgs &a) {
  if (!a.config.empty() && !a.preset.empty()) {
    throw UsageError("--config and --preset are mutually exclusive");
  }
  loma::Config cfg;
  if (!a.config.empty()) cfg = loma::load_config(a.config);
  if (!a.preset.empty()) cfg = loma::preset(a.preset);
  const auto seed = resolve_seed(a.seed);

  const loma::RunReport report = loma::run_batch(a.in, a.out, cfg.image, seed, a.jobs);
  loma::write_report(std::cout, report);
  if (report.failed_count() > 0) {
    std::cerr << "augment: " << report.failed_count() << " of " << report.items.size()
              << " files failed\n";
    for (const auto &item : report.items) {
      if (item.error) std::cerr << "  " << item.name << ": " << *item.error << '\n';
    }
    return kIo;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct PreviewArgs {
  std::string in, out, shape;
  int n = 1;
  bool overlay = false;
  std::optional<std::uint64_t> seed;
};

int run_preview(const PreviewArgs &a) {
  if (a.n < 1) throw UsageError("--n must be at least 1");
  loma::LomaConfig cfg;
  if (!a.shape.empty()) {
    const auto shape = loma::parse_shape(a.shape);
    if (!shape) throw UsageError("--shape must be rhombus or ellipse");
    cfg.shape = *shape;
  }
  const auto seed = resolve_seed(a.seed);
  const loma::Image8 input = loma::read_image(a.in);
  const auto variants = loma::preview_variants(input, cfg, seed, a.n);

  std::vector<loma::Image8> plain, marked;
  for (std::size_t k = 0; k < variants.size(); ++k) {
    const auto &v = variants[k];
    plain.push_back(v.image);
    if (a.overlay) {
      loma::Image8 copy = v.image;
      loma::draw_region_outline(copy, *v.spec);
      marked.push_back(std::move(copy));
    }
    emit({{"index", k}, {"spec", loma::to_json(v.spec)}});
  }

  const fs::path out(a.out);
  if (fs::is_directory(out)) {
    for (std::size_t k = 0; k < plain.size(); ++k) {
      loma::write_png(out / ("preview_" + std::to_string(k) + ".png"), plain[k]);
      if (a.overlay) {
        loma::write_png(out / ("preview_" + std::to_string(k) + "_overlay.png"), marked[k]);
      }
    }
    if (plain.size() > 1) {
      loma::write_png(out / "grid.png", loma::make_grid(plain));
      if (a.overlay) loma::write_png(out / "grid_overlay.png", loma::make_grid(marked));
    }
  } else {
    loma::write_png(out, loma::make_grid(plain));
    if (a.overlay) {
      const fs::path overlay_path =
          out.parent_path() / (out.stem().string() + "_overlay" + out.extension().string());
      loma::write_png(overlay_path, loma::make_grid(marked));
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct FeatureArgs {
  std::string op, in, out, config;
  std::optional<std::uint64_t> seed;
};

int run_feature(const FeatureArgs &a) {
  loma::Config cfg;
  if (!a.config.empty()) cfg = loma::load_config(a.config);
  const auto seed = resolve_seed(a.seed);
  const loma::FeatureMap fm = loma::read_tensor(a.in);
  loma::RngStream rng = loma::RngStream::for_item(seed, 0);

  json record = {{"op", a.op}};
  std::optional<loma::FeatureMap> result;
  if (a.op == "loma") {
    const auto spec = loma::sample_spec(rng, cfg.image, static_cast<int>(fm.width()),
                                        static_cast<int>(fm.height()));
    result = loma::loma_f(fm, spec);
    record["spec"] = loma::to_json(spec);
  } else if (a.op == "offset") {
    const auto t = loma::sample_offset(rng, cfg.feature.gamma, fm.height(), fm.width());
    result = loma::feature_offset(fm, t);
    record["offset"] = loma::to_json(t);
  } else {
    loma::FeatureAugConfig fcfg = cfg.feature;
    fcfg.p_f = 1.0;
    auto res = loma::feature_augment(fm, cfg.image, fcfg, rng);
    record["spec"] = loma::to_json(res.spec);
    record["offset"] = res.offset ? loma::to_json(*res.offset) : json(nullptr);
    result = std::move(res.map);
  }
  loma::write_tensor(a.out, *result);
  emit(record);
  return kOk;
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::size_t count = 1;
  int width = 0, height = 0;
};

int run_sample(const SampleArgs &a) {
  loma::Config cfg;
  if (!a.config.empty()) cfg = loma::load_config(a.config);
  const auto seed = resolve_seed(a.seed);
  for (std::size_t i = 0; i < a.count; ++i) {
    // Same draws run_batch makes for item i: the gate, then the spec.
    loma::RngStream rng = loma::RngStream::for_item(seed, i);
    const bool applied = rng.uniform() < cfg.image.p;
    const auto spec = loma::sample_spec(rng, cfg.image, a.width, a.height);
    emit({{"index", i}, {"applied", applied}, {"spec", loma::to_json(spec)}});
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  int width = 0, height = 0;
  std::size_t iters = 0;
  unsigned jobs = default_jobs();
  std::string interp = "bilinear";
};

std::uint64_t fnv1a(std::uint64_t h, const void *data, std::size_t size) {
  const auto *p = static_cast<const unsigned char *>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

int run_bench(const BenchArgs &a) {
  const auto interp = loma::parse_interp(a.interp);
  if (!interp) throw UsageError("--interp must be nearest or bilinear");
  loma::LomaConfig cfg;
  cfg.p = 1.0;
  cfg.interp = *interp;
  const auto seed = resolve_seed(std::nullopt);

  std::vector<loma::Image8> images;
  images.reserve(a.iters);
  for (std::size_t i = 0; i < a.iters; ++i) {
    loma::RngStream fill(loma::splitmix64_mix(i + 1));
    loma::Image8 img(a.width, a.height, 3);
    for (auto &v : img.data()) v = static_cast<std::uint8_t>(fill.next64() >> 56);
    images.push_back(std::move(img));
  }

  using clock = std::chrono::steady_clock;
  const auto timed = [&](unsigned workers) {
    const auto t0 = clock::now();
    auto results = loma::augment_images<std::uint8_t>(images, cfg, seed, workers);
    const double seconds = std::chrono::duration<double>(clock::now() - t0).count();
    return std::make_pair(std::move(results), seconds);
  };
  const auto [single, single_s] = timed(1);
  const auto [multi, multi_s] = timed(a.jobs);

  std::uint64_t spec_digest = 0xCBF29CE484222325ULL;
  std::uint64_t pixel_digest = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < single.size(); ++i) {
    const std::string line = loma::to_json(single[i].spec).dump();
    spec_digest = fnv1a(spec_digest, line.data(), line.size());
    const auto px = single[i].image.data();
    pixel_digest = fnv1a(pixel_digest, px.data(), px.size());
    if (single[i].image != multi[i].image) {
      std::cerr << "bench: worker count changed the output of item " << i << '\n';
      return kValidation;
    }
  }

  const auto stats = [&](double seconds) {
    const double n = static_cast<double>(a.iters);
    return json{{"seconds", seconds},
                {"images_per_s", seconds > 0.0 ? n / seconds : 0.0},
                {"us_per_image", n > 0.0 ? seconds * 1e6 / n : 0.0}};
  };
  char spec_hex[17], pixel_hex[17];
  std::snprintf(spec_hex, sizeof spec_hex, "%016llx", static_cast<unsigned long long>(spec_digest));
  std::snprintf(pixel_hex, sizeof pixel_hex, "%016llx", static_cast<unsigned long long>(pixel_digest));
  emit({{"record", "bench"},
        {"width", a.width},
        {"height", a.height},
        {"iters", a.iters},
        {"interp", a.interp},
        {"jobs", a.jobs},
        {"single", stats(single_s)},
        {"multi", stats(multi_s)},
        {"speedup", multi_s > 0.0 ? single_s / multi_s : 0.0},
        {"spec_digest", spec_hex},
        {"pixel_digest", pixel_hex}});
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Local magnification data augmentation for images and feature maps"};
  app.require_subcommand(1);

  AugmentArgs augment;
  auto *aug = app.add_subcommand("augment", "Augment every PNG/JPEG in a directory");
  aug->add_option("--in", augment.in, "Input directory")->required();
  aug->add_option("--out", augment.out, "Output directory")->required();
  aug->add_option("--config", augment.config, "JSON config file");
  aug->add_option("--preset", augment.preset, "cifar, imagenet or detection");
  aug->add_option("--seed", augment.seed, "Master seed (falls back to LOMA_SEED)");
  aug->add_option("--jobs", augment.jobs, "Worker threads")->check(CLI::PositiveNumber);

  PreviewArgs preview;
  auto *pre = app.add_subcommand("preview", "Render augmented variants of one image");
  pre->add_option("--in", preview.in, "Input image")->required();
  pre->add_option("--out", preview.out, "Output image or existing directory")->required();
  pre->add_option("--n", preview.n, "Number of variants");
  pre->add_flag("--overlay", preview.overlay, "Also write copies with the region outline drawn");
  pre->add_option("--shape", preview.shape, "rhombus or ellipse");
  pre->add_option("--seed", preview.seed, "Master seed (falls back to LOMA_SEED)");

  FeatureArgs feature;
  auto *fea = app.add_subcommand("feature", "Augment a feature-map tensor file");
  fea->add_option("--op", feature.op, "loma, offset or both")
      ->required()
      ->check(CLI::IsMember({"loma", "offset", "both"}));
  fea->add_option("--in", feature.in, "Input tensor")->required();
  fea->add_option("--out", feature.out, "Output tensor")->required();
  fea->add_option("--config", feature.config, "JSON config file");
  fea->add_option("--seed", feature.seed, "Master seed (falls back to LOMA_SEED)");

  SampleArgs sample;
  auto *sam = app.add_subcommand("sample", "Print the specs a batch run would use");
  sam->add_option("--config", sample.config, "JSON config file");
  sam->add_option("--seed", sample.seed, "Master seed (falls back to LOMA_SEED)");
  sam->add_option("--count", sample.count, "Number of items")->required();
  sam->add_option("--width", sample.width, "Image width")->required()->check(CLI::PositiveNumber);
  sam->add_option("--height", sample.height, "Image height")->required()->check(CLI::PositiveNumber);

  BenchArgs bench;
  auto *ben = app.add_subcommand("bench", "Time the kernel on synthetic images");
  ben->add_option("--width", bench.width, "Image width")->required()->check(CLI::PositiveNumber);
  ben->add_option("--height", bench.height, "Image height")->required()->check(CLI::PositiveNumber);
  ben->add_option("--iters", bench.iters, "Number of images")->required();
  ben->add_option("--jobs", bench.jobs, "Worker threads")->check(CLI::PositiveNumber);
  ben->add_option("--interp", bench.interp, "nearest or bilinear");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*aug) return run_augment(augment);
    if (*pre) return run_preview(preview);
    if (*fea) return run_feature(feature);
    if (*sam) return run_sample(sample);
    if (*ben) return run_bench(bench);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const loma::ConfigError &e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kValidation;
  } catch (const loma::TensorFormatError &e) {
    std::cerr << "tensor format error: " << e.what() << '\n';
    return kIo;
  } catch (const loma::IoError &e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument &e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}

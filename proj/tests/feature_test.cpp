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
#include "loma/feature.hpp"

#include <algorithm>
#include <numeric>

#include "gtest/gtest.h"
#include "oracle/reference_oracle.hpp"
#include "test_support.hpp"

namespace loma {
namespace {

using test_support::Gen;

std::vector<float> values(const FeatureMap &fm) { return {fm.data().begin(), fm.data().end()}; }

FeatureMap ramp_8x8() {
  std::vector<float> v(64);
  std::iota(v.begin(), v.end(), 0.0f);
  return FeatureMap(1, 1, 8, 8, v);
}

TEST(FeatureMap, RejectsBadDims) {
  EXPECT_THROW(FeatureMap(0, 1, 2, 2), std::invalid_argument);
  EXPECT_THROW(FeatureMap(1, 1, 2, 2, std::vector<float>(3)), std::invalid_argument);
}

TEST(FeatureOffset, ShiftRightByOne) {
  std::vector<float> v(16);
  std::iota(v.begin(), v.end(), 1.0f);
  const FeatureMap fm(1, 1, 4, 4, v);
  const FeatureMap out = feature_offset(fm, OffsetSpec{1, 0});
  const std::vector<float> expected = {0, 1, 2,  3,  0, 5,  6,  7,
                                       0, 9, 10, 11, 0, 13, 14, 15};
  EXPECT_EQ(values(out), expected);
  EXPECT_EQ(std::count(out.data().begin(), out.data().end(), 0.0f), 4);
}

TEST(FeatureOffset, PositiveTyMovesContentUp) {
  std::vector<float> v(16);
  std::iota(v.begin(), v.end(), 1.0f);
  const FeatureMap out = feature_offset(FeatureMap(1, 1, 4, 4, v), OffsetSpec{0, 1});
  // Storage row 0 is the top, so the top row is dropped and the bottom row is vacated.
  const std::vector<float> expected = {5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 0, 0, 0, 0};
  EXPECT_EQ(values(out), expected);
}

TEST(FeatureOffset, ZeroGammaIsIdentity) {
  Gen g(1);
  const auto fm = test_support::random_feature_map(g, 2, 3, 5, 7);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(seed);
    EXPECT_EQ(feature_offset(fm, 0.0, rng), fm);
    EXPECT_EQ(rng.draws(), 2u);
  }
}

TEST(FeatureOffset, ShiftBeyondDimensionEmptiesPlane) {
  Gen g(2);
  const auto fm = test_support::random_feature_map(g, 1, 2, 3, 5);
  const auto out = feature_offset(fm, OffsetSpec{-5, 0});
  EXPECT_TRUE(std::all_of(out.data().begin(), out.data().end(), [](float v) { return v == 0.0f; }));
}

TEST(FeatureOffset, SampledOffsetWithinGammaRange) {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    RngStream rng(seed);
    const OffsetSpec t = sample_offset(rng, 0.25, 8, 12);
    ASSERT_LE(std::abs(t.t_x), 3);
    ASSERT_LE(std::abs(t.t_y), 3);
  }
  RngStream rng(0);
  EXPECT_THROW(sample_offset(rng, -0.1, 4, 4), std::invalid_argument);
}

TEST(FeatureOffset, SampledOffsetFormula) {
  RngStream rng(31);
  RngStream mirror(31);
  const OffsetSpec t = sample_offset(rng, 0.5, 6, 10);
  const double ux = mirror.uniform();
  const double uy = mirror.uniform();
  EXPECT_EQ(t.t_x, static_cast<int>(std::round(ux * 2.0 * 5.0 - 5.0)));
  EXPECT_EQ(t.t_y, static_cast<int>(std::round(uy * 2.0 * 5.0 - 5.0)));
}

TEST(FeatureOffset, MatchesOracleAndZeroCount) {
  Gen g(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto h = static_cast<std::size_t>(test_support::uniform_int(g, 1, 12));
    const auto w = static_cast<std::size_t>(test_support::uniform_int(g, 1, 12));
    auto fm = test_support::random_feature_map(g, 2, 2, h, w);
    // Nonzero inputs so zero cells are exactly the vacated ones.
    for (auto &v : fm.data()) v = std::abs(v) + 0.5f;
    const OffsetSpec t{test_support::uniform_int(g, -int(w), int(w)),
                       test_support::uniform_int(g, -int(h), int(h))};
    const auto out = feature_offset(fm, t);
    ASSERT_EQ(out, oracle::oracle_offset(fm, t.t_x, t.t_y));
    const std::size_t kept = (h - std::abs(t.t_y)) * (w - std::abs(t.t_x));
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t c = 0; c < 2; ++c) {
        const auto s = out.slice(b, c);
        ASSERT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), 0.0f)), h * w - kept);
      }
    }
  }
}

TEST(LomaF, GoldenRamp) {
  RngStream rng = RngStream::for_item(42, 0);
  const FeatureMap out = loma_f(ramp_8x8(), LomaConfig{}, rng);
  // Sampled spec: center (2, 7), r = 2.8468335144697434, a_y = 2.3538314776433045.
  const std::vector<float> golden = {
      0.594930112f, 1.64873254f, 2, 2.35126758f, 3.40506983f, 5, 6, 7,
      8, 9, 4.81013966f, 11, 12, 13, 14, 15,
      16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 31,
      32, 33, 34, 35, 36, 37, 38, 39, 40, 41, 42, 43, 44, 45, 46, 47,
      48, 49, 50, 51, 52, 53, 54, 55, 56, 57, 58, 59, 60, 61, 62, 63};
  const auto got = values(out);
  ASSERT_EQ(got.size(), golden.size());
  for (std::size_t i = 0; i < golden.size(); ++i) EXPECT_FLOAT_EQ(got[i], golden[i]) << i;
}

TEST(LomaF, SharedSpecAcrossBatchAndChannels) {
  Gen g(4);
  const auto plane = test_support::random_feature_map(g, 1, 1, 9, 11);
  FeatureMap fm(3, 2, 9, 11);
  for (std::size_t b = 0; b < 3; ++b)
    for (std::size_t c = 0; c < 2; ++c)
      std::copy(plane.data().begin(), plane.data().end(), fm.slice(b, c).begin());
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RngStream rng(seed);
    const auto out = loma_f(fm, LomaConfig{}, rng);
    const auto first = out.slice(0, 0);
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 2; ++c)
        ASSERT_TRUE(std::equal(first.begin(), first.end(), out.slice(b, c).begin()));
  }
}

TEST(LomaF, MatchesOracle) {
  Gen g(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = test_support::uniform_int(g, 1, 16);
    const auto w = test_support::uniform_int(g, 1, 16);
    const auto fm = test_support::random_feature_map(g, 2, 3, std::size_t(h), std::size_t(w));
    const auto spec = test_support::random_spec(g, w, h);
    ASSERT_EQ(loma_f(fm, spec), oracle::oracle_loma_f(fm, spec));
  }
}

TEST(LomaF, EmptyRegionIsIdentity) {
  const FeatureMap fm = ramp_8x8();
  const DeformationSpec s{{3.5, 3.5}, 0.2, Shape::Rhombus, 1, 1};
  EXPECT_EQ(loma_f(fm, s), fm);
}

TEST(FeatureAugment, GateOffIsIdentity) {
  Gen g(6);
  const auto fm = test_support::random_feature_map(g, 2, 2, 6, 6);
  FeatureAugConfig fcfg;
  fcfg.p_f = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(seed);
    const auto res = feature_augment(fm, LomaConfig{}, fcfg, rng);
    ASSERT_EQ(res.map, fm);
    ASSERT_FALSE(res.spec);
    ASSERT_EQ(rng.draws(), 1u);
  }
}

TEST(FeatureAugment, IdentityWhenBothStagesAreIdentity) {
  const FeatureMap fm = ramp_8x8();
  LomaConfig lcfg;
  // Radius 0.001 * 8 reaches no neighbour of the integer center.
  lcfg.r_min = lcfg.r_max = 0.001;
  FeatureAugConfig fcfg;
  fcfg.p_f = 1.0;
  fcfg.gamma = 0.0;
  RngStream rng(5);
  const auto res = feature_augment(fm, lcfg, fcfg, rng);
  EXPECT_EQ(res.map, fm);
  EXPECT_TRUE(res.spec);
  EXPECT_EQ(res.offset, (OffsetSpec{0, 0}));
  EXPECT_EQ(rng.draws(), 8u);
}

TEST(FeatureAugment, GoldenTwoChannels) {
  std::vector<float> v(128);
  for (int i = 0; i < 128; ++i) {
    v[i] = i < 64 ? float(i) : float(100 + (i - 64) % 8 * 3 - (i - 64) / 8);
  }
  const FeatureMap fm(1, 2, 8, 8, v);
  FeatureAugConfig fcfg;
  fcfg.p_f = 1.0;
  RngStream rng = RngStream::for_item(7, 0);
  const auto res = feature_augment(fm, LomaConfig{}, fcfg, rng);
  ASSERT_TRUE(res.spec);
  EXPECT_EQ(res.spec->center, (PixelCoord{3, 6}));
  EXPECT_EQ(res.offset, (OffsetSpec{0, -2}));
  const std::vector<float> golden = {
      0, 0, 0, 0, 0, 0, 0, 0,
      0, 0, 0, 0, 0, 0, 0, 0,
      0, 1, 2, 6.90547895f, 4, 5, 6, 7,
      8, 9, 10.4881849f, 11, 11.5118151f, 13, 14, 15,
      16, 17, 18, 15.0945215f, 20, 21, 22, 23,
      24, 25, 26, 27, 28, 29, 30, 31,
      32, 33, 34, 35, 36, 37, 38, 39,
      40, 41, 42, 43, 44, 45, 46, 47,
      0, 0, 0, 0, 0, 0, 0, 0,
      0, 0, 0, 0, 0, 0, 0, 0,
      100, 103, 106, 108.511818f, 112, 115, 118, 121,
      99, 102, 106.464554f, 108, 109.535446f, 114, 117, 120,
      98, 101, 104, 107.488182f, 110, 113, 116, 119,
      97, 100, 103, 106, 109, 112, 115, 118,
      96, 99, 102, 105, 108, 111, 114, 117,
      95, 98, 101, 104, 107, 110, 113, 116};
  const auto got = values(res.map);
  for (std::size_t i = 0; i < golden.size(); ++i) EXPECT_FLOAT_EQ(got[i], golden[i]) << i;
  EXPECT_EQ(res.map, oracle::oracle_offset(oracle::oracle_loma_f(fm, *res.spec), 0, -2));
}

} // namespace
} // namespace loma

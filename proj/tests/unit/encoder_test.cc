// Copyright 2026 The afford Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "afford/encoder.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <random>
#include <vector>

#include "afford/error.h"

namespace afford {
namespace {

constexpr int kWidth = 30;

CategorizedObject obj(Category c, int x, int y, Cell v, Extent e = {1, 1}) {
  return {c, Box{{x, y}, e}, v};
}

const Box kAgent{{10, 19}, {1, 1}};

// Oracle: marks every cell swept by an object's extrapolated footprint on
// the agent's rows, then reads the bits column by column.
EncodedState oracle_encode(const std::vector<CategorizedObject>& objects, const Box& agent,
                           int width, const EncoderConfig& cfg) {
  EncodedState out;
  out.planes.assign(cfg.planes.size(), std::vector<bool>(2 * cfg.k + 1, false));
  for (std::size_t p = 0; p < cfg.planes.size(); ++p) {
    for (const auto& o : objects) {
      const bool member = cfg.planes[p] == Category::kMovingBad
                              ? (o.category == Category::kMovingBad ||
                                 o.category == Category::kUnknown)
                              : o.category == cfg.planes[p];
      if (!member) continue;
      const int max_h = cfg.k * cfg.agent_steps_per_cell + cfg.slack;
      for (int t = 0; t <= max_h; ++t) {
        if (t > 0 && o.velocity == Cell{}) break;
        const int x0 = o.box.origin.x + o.velocity.x * t;
        const int y0 = o.box.origin.y + o.velocity.y * t;
        const bool rows = y0 < agent.origin.y + agent.extent.height &&
                          agent.origin.y < y0 + o.box.extent.height;
        if (!rows) continue;
        for (int x = x0; x < x0 + o.box.extent.width; ++x) {
          const int i = x - agent.origin.x;
          if (std::abs(i) > cfg.k || x < 0 || x >= width) continue;
          if (t <= std::abs(i) * cfg.agent_steps_per_cell + cfg.slack) {
            out.planes[p][i + cfg.k] = true;
          }
        }
      }
    }
  }
  out.at_left = agent.origin.x == 0;
  out.at_right = agent.origin.x + agent.extent.width == width;
  out.has_bullet_bit = cfg.has_bullet_bit;
  if (cfg.has_bullet_bit) {
    for (const auto& o : objects) out.bullet |= o.category == Category::kAgentObject;
  }
  return out;
}

TEST(EncodeTest, FallingAlienAboveAgentSetsCenterBit) {
  const EncoderConfig cfg = builtin_encoder_config("myaliensv1");
  const std::vector<CategorizedObject> objs = {obj(Category::kMovingBad, 10, 18, {0, 1})};
  const EncodedState s = encode(objs, kAgent, kWidth, cfg);
  EXPECT_TRUE(s.planes[0][cfg.k]);
  EXPECT_EQ(state_key(s), std::uint64_t{1} << cfg.k);
}

TEST(EncodeTest, DistantAlienSetsNothing) {
  const EncoderConfig cfg = builtin_encoder_config("myaliensv1");
  const std::vector<CategorizedObject> objs = {obj(Category::kMovingBad, 13, 5, {0, 1})};
  EXPECT_EQ(state_key(encode(objs, kAgent, kWidth, cfg)), 0u);
}

TEST(EncodeTest, HorizonGrowsWithOffset) {
  const EncoderConfig cfg = builtin_encoder_config("myaliensv1");
  // Three rows above at offset 2 arrives in time; at offset 1 it does not.
  const std::vector<CategorizedObject> far = {obj(Category::kMovingBad, 12, 16, {0, 1})};
  const std::vector<CategorizedObject> near = {obj(Category::kMovingBad, 11, 16, {0, 1})};
  EXPECT_TRUE(encode(far, kAgent, kWidth, cfg).planes[0][cfg.k + 2]);
  EXPECT_FALSE(encode(near, kAgent, kWidth, cfg).planes[0][cfg.k + 1]);
}

TEST(EncodeTest, NonThreatCategoriesSetNoPlaneBits) {
  const EncoderConfig cfg = builtin_encoder_config("myaliensv1");
  for (Category c : {Category::kStatic, Category::kAgentObject, Category::kMovingGood,
                     Category::kAgent}) {
    const std::vector<CategorizedObject> objs = {obj(c, 10, 18, {0, 1})};
    EXPECT_EQ(state_key(encode(objs, kAgent, kWidth, cfg)), 0u) << to_string(c);
  }
}

TEST(EncodeTest, UnknownCountsAsThreat) {
  const EncoderConfig cfg = builtin_encoder_config("myaliensv1");
  const std::vector<CategorizedObject> objs = {obj(Category::kUnknown, 10, 18, {0, 1})};
  EXPECT_TRUE(encode(objs, kAgent, kWidth, cfg).planes[0][cfg.k]);
}

TEST(EncodeTest, GoodPlaneTracksFood) {
  const EncoderConfig cfg = builtin_encoder_config("myaliensv2");
  const std::vector<CategorizedObject> objs = {obj(Category::kMovingGood, 9, 18, {0, 1})};
  const EncodedState s = encode(objs, kAgent, kWidth, cfg);
  EXPECT_FALSE(s.planes[0][cfg.k - 1]);
  EXPECT_TRUE(s.planes[1][cfg.k - 1]);
}

TEST(EncodeTest, EdgeFlags) {
  const EncoderConfig cfg = builtin_encoder_config("roadrash");
  EXPECT_TRUE(encode({}, Box{{0, 5}, {1, 1}}, kWidth, cfg).at_left);
  EXPECT_TRUE(encode({}, Box{{kWidth - 1, 5}, {1, 1}}, kWidth, cfg).at_right);
  const EncodedState mid = encode({}, kAgent, kWidth, cfg);
  EXPECT_FALSE(mid.at_left || mid.at_right);
}

TEST(EncodeTest, BulletBit) {
  const EncoderConfig cfg = builtin_encoder_config("spaceinvaders");
  const std::vector<CategorizedObject> objs = {obj(Category::kAgentObject, 3, 3, {0, -1})};
  const EncodedState s = encode(objs, kAgent, kWidth, cfg);
  EXPECT_TRUE(s.bullet);
  EXPECT_EQ(state_key(s), std::uint64_t{1} << (total_bits(cfg) - 1));
}

TEST(EncodeTest, RejectsAgentOutsideGrid) {
  EXPECT_THROW(encode({}, Box{{kWidth, 0}, {1, 1}}, kWidth, EncoderConfig{}), ContractViolation);
}

TEST(EncoderConfigTest, Validation) {
  EncoderConfig cfg;
  cfg.k = 0;
  EXPECT_THROW(validate(cfg), ContractViolation);
  cfg = {};
  cfg.planes = {Category::kStatic};
  EXPECT_THROW(validate(cfg), ContractViolation);
  cfg.planes = {Category::kMovingBad, Category::kMovingBad};
  EXPECT_THROW(validate(cfg), ContractViolation);
  cfg = {};
  cfg.k = 40;
  EXPECT_THROW(validate(cfg), ContractViolation);
}

TEST(EncoderConfigTest, BuiltinWidths) {
  EXPECT_EQ(total_bits(builtin_encoder_config("myaliensv1")), 11);
  EXPECT_EQ(total_bits(builtin_encoder_config("myaliensv2")), 20);
  EXPECT_EQ(total_bits(builtin_encoder_config("roadrash")), 7);
  EXPECT_EQ(total_bits(builtin_encoder_config("spaceinvaders")), 12);
  EXPECT_EQ(total_bits(wide_encoder_config()), 27);
  for (const auto& [name, cfg] : builtin_encoder_configs()) EXPECT_NO_THROW(validate(cfg));
  EXPECT_THROW(builtin_encoder_config("pong"), ContractViolation);
}

std::vector<CategorizedObject> random_objects(std::mt19937_64& rng) {
  static constexpr Category kCats[] = {Category::kStatic, Category::kMovingGood,
                                       Category::kMovingBad, Category::kAgentObject,
                                       Category::kUnknown};
  std::vector<CategorizedObject> out;
  const int n = static_cast<int>(rng() % 8);
  for (int i = 0; i < n; ++i) {
    const Category c = kCats[rng() % 5];
    const Extent e{1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 2)};
    const Cell v = c == Category::kStatic
                       ? Cell{}
                       : Cell{static_cast<int>(rng() % 3) - 1, static_cast<int>(rng() % 3) - 1};
    out.push_back(obj(c, static_cast<int>(rng() % kWidth), 10 + static_cast<int>(rng() % 10),
                      v, e));
  }
  return out;
}

// Property: encode agrees with the sweep oracle on random scenes.
TEST(EncodePropertyTest, MatchesOracle) {
  std::mt19937_64 rng(4);
  for (const auto& [name, cfg] : builtin_encoder_configs()) {
    for (int trial = 0; trial < 500; ++trial) {
      const auto objs = random_objects(rng);
      const Box agent{{static_cast<int>(rng() % kWidth), 19}, {1, 1}};
      ASSERT_EQ(encode(objs, agent, kWidth, cfg), oracle_encode(objs, agent, kWidth, cfg))
          << name << " trial " << trial;
    }
  }
}

// Property: keys fit the layout and unpack inverts state_key.
TEST(EncodePropertyTest, KeyRoundTripsAndFitsLayout) {
  std::mt19937_64 rng(8);
  for (const auto& [name, cfg] : builtin_encoder_configs()) {
    const int bits = total_bits(cfg);
    for (int trial = 0; trial < 300; ++trial) {
      const auto objs = random_objects(rng);
      const Box agent{{static_cast<int>(rng() % kWidth), 19}, {1, 1}};
      const EncodedState s = encode(objs, agent, kWidth, cfg);
      const std::uint64_t key = state_key(s);
      EXPECT_LT(key, std::uint64_t{1} << bits);
      EXPECT_EQ(unpack(key, cfg), s);
    }
    for (int trial = 0; trial < 300; ++trial) {
      const std::uint64_t key = rng() & ((std::uint64_t{1} << bits) - 1);
      EXPECT_EQ(state_key(unpack(key, cfg)), key);
    }
  }
}

// Property: away from the edges, shifting the whole scene keeps the key.
TEST(EncodePropertyTest, HorizontalTranslationInvariance) {
  std::mt19937_64 rng(12);
  const EncoderConfig cfg = builtin_encoder_config("myaliensv2");
  for (int trial = 0; trial < 300; ++trial) {
    auto objs = random_objects(rng);
    const Box agent{{8 + static_cast<int>(rng() % 10), 19}, {1, 1}};
    const int shift = static_cast<int>(rng() % 5) - 2;
    auto moved = objs;
    for (auto& o : moved) o.box.origin.x += shift;
    Box moved_agent = agent;
    moved_agent.origin.x += shift;
    EXPECT_EQ(state_key(encode(objs, agent, 60, cfg)),
              state_key(encode(moved, moved_agent, 60, cfg)));
  }
}

// Property: object order does not matter.
TEST(EncodePropertyTest, OrderInvariance) {
  std::mt19937_64 rng(13);
  const EncoderConfig cfg = builtin_encoder_config("spaceinvaders");
  for (int trial = 0; trial < 200; ++trial) {
    auto objs = random_objects(rng);
    const auto before = state_key(encode(objs, kAgent, kWidth, cfg));
    std::shuffle(objs.begin(), objs.end(), rng);
    EXPECT_EQ(state_key(encode(objs, kAgent, kWidth, cfg)), before);
  }
}

}  // namespace
}  // namespace afford

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

#include "afford/engine.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "afford/environment.h"
#include "afford/error.h"
#include "afford/gamespec.h"
#include "test_games.h"

namespace afford {
namespace {

using ::afford::testing::kMinimalGame;
using ::afford::testing::kTinyDodger;
using ::afford::testing::kTinyShooter;

int count_class(const WorldState& s, std::string_view cls) {
  const int index = s.game->class_index(cls);
  return static_cast<int>(std::count_if(s.objects.begin(), s.objects.end(),
                                        [&](const auto& o) { return o.class_index == index; }));
}

GameSpec with_level(GameSpec spec, LevelDef level) {
  spec.levels = {std::move(level)};
  return spec;
}

// Exact key of a state, RNG included, for deduplicating search frontiers.
std::string state_key(const WorldState& s) {
  std::ostringstream out;
  out << s.score << ' ' << static_cast<int>(s.status) << ' ' << s.step_count << ' '
      << s.next_instance_id << ' ' << s.rng << '|';
  for (const auto& o : s.objects) {
    out << o.instance_id << ':' << o.class_index << ':' << o.position.x << ','
        << o.position.y << ';';
  }
  for (int d : s.march_direction) out << d << ',';
  for (int p : s.march_progress) out << p << ',';
  for (int c : s.collected) out << c << ',';
  return out.str();
}

// Oracle: breadth-first search over every action sequence of one level,
// deduplicated by exact state. Returns the best final score.
int exhaustive_best_score(const GameSpec& spec, std::uint64_t seed) {
  std::map<std::string, WorldState> frontier;
  WorldState start = reset(spec, 0, seed);
  frontier.emplace(state_key(start), start);
  int best = start.score;
  const int keys = static_cast<int>(spec.actions.size());
  while (!frontier.empty()) {
    std::map<std::string, WorldState> next;
    for (const auto& [key, s] : frontier) {
      for (int a = 0; a < keys; ++a) {
        auto [n, outcome] = step(s, a);
        best = std::max(best, n.score);
        if (n.status == Status::kRunning) next.emplace(state_key(n), std::move(n));
      }
    }
    frontier = std::move(next);
  }
  return best;
}

TEST(ResetTest, IsDeterministic) {
  const GameSpec& v1 = builtin_spec("myaliensv1");
  EXPECT_EQ(reset(v1, 0, 42), reset(v1, 0, 42));
}

TEST(ResetTest, SpaceInvadersHas25EnemiesAndOnePlayer) {
  const GameSpec& si = builtin_spec("spaceinvaders");
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    for (int level = 0; level < 2; ++level) {
      const WorldState s = reset(si, level, seed);
      EXPECT_EQ(count_class(s, "invader"), 25);
      EXPECT_EQ(count_class(s, "ship"), 1);
    }
  }
}

TEST(ResetTest, RoadrashCarsStayInFourLanes) {
  const GameSpec& rr = builtin_spec("roadrash");
  GameEnv env(rr);
  env.reset(7);
  ASSERT_NE(env.state().player(), nullptr);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const Transition tr = env.step(static_cast<int>(rng() % 3));
    for (const auto& o : env.state().objects) {
      EXPECT_GE(o.position.x, 0);
      EXPECT_LT(o.position.x, 4);
    }
    if (tr.done) env.reset(rng());
  }
}

TEST(ResetTest, LevelOutOfRangeThrows) {
  EXPECT_THROW(reset(builtin_spec("myaliensv1"), 5, 0), ContractViolation);
  EXPECT_THROW(reset(builtin_spec("myaliensv1"), -1, 0), ContractViolation);
}

TEST(StepTest, MyAliensFallingEnemyKillsThePlayer) {
  GameSpec spec = builtin_spec("myaliensv1");
  spec = with_level(spec, LevelDef{{{"avatar", {15, 19}}, {"alien", {15, 18}}}});
  auto [s, outcome] = step(reset(spec, 0, 1), 0);
  EXPECT_EQ(outcome.reward, -10);
  EXPECT_EQ(outcome.status_after, Status::kLost);
  EXPECT_EQ(s.player(), nullptr);
}

TEST(StepTest, MyAliensV2FoodGivesOnePoint) {
  GameSpec spec = builtin_spec("myaliensv2");
  spec = with_level(spec, LevelDef{{{"avatar", {15, 19}}, {"food", {15, 18}}}});
  auto [s, outcome] = step(reset(spec, 0, 1), 0);
  EXPECT_EQ(outcome.reward, 1);
  EXPECT_EQ(outcome.status_after, Status::kRunning);
  EXPECT_EQ(count_class(s, "food"), 0);
  EXPECT_NE(s.player(), nullptr);
}

TEST(StepTest, SpaceInvadersLaserKillsEnemy) {
  GameSpec spec = builtin_spec("spaceinvaders");
  // The invader marches into column 5 on the first step.
  spec = with_level(spec, LevelDef{{{"ship", {5, 25}},
                                    {"invader", {4, 22}},
                                    {"invader", {0, 1}}}});
  const int fire = 3;
  WorldState s = reset(spec, 0, 1);
  int reward = 0;
  for (int t = 0; t < 3 && s.status == Status::kRunning; ++t) {
    auto [n, outcome] = step(s, t == 0 ? fire : 0);
    reward += outcome.reward;
    s = std::move(n);
  }
  EXPECT_EQ(reward, 10);
  EXPECT_EQ(count_class(s, "invader"), 1);
  EXPECT_EQ(count_class(s, "laser"), 0);
}

TEST(StepTest, SteppingFinishedStateThrows) {
  GameSpec spec = builtin_spec("myaliensv1");
  spec = with_level(spec, LevelDef{{{"avatar", {15, 19}}, {"alien", {15, 18}}}});
  WorldState s = reset(spec, 0, 1);
  step_in_place(s, 0);
  ASSERT_EQ(s.status, Status::kLost);
  EXPECT_THROW(step_in_place(s, 0), ContractViolation);
}

TEST(StepTest, ActionOutsideKeySetThrows) {
  WorldState s = reset(builtin_spec("myaliensv1"), 0, 1);
  EXPECT_THROW(step_in_place(s, 7), ContractViolation);
}

TEST(StepTest, StepCountAdvancesByOne) {
  WorldState s = reset(builtin_spec("myaliensv2"), 0, 3);
  for (int t = 1; t <= 5; ++t) {
    step_in_place(s, 0);
    EXPECT_EQ(s.step_count, t);
  }
}

TEST(StepTest, RoadrashWinsExactlyAtStep300WithoutCars) {
  GameSpec spec = builtin_spec("roadrash");
  for (auto& rule : spec.dynamics_rules) {
    if (auto* r = std::get_if<SpawnRandomRule>(&rule)) r->rate = 0.0;
  }
  WorldState s = reset(spec, 0, 1);
  int total = 0;
  while (s.status == Status::kRunning) {
    total += step_in_place(s, 0).reward;
    if (s.status == Status::kRunning) EXPECT_LT(s.step_count, 300);
  }
  EXPECT_EQ(s.status, Status::kWon);
  EXPECT_EQ(s.step_count, 300);
  EXPECT_EQ(total, 300);
}

TEST(ObserveTest, FreshMyAliensHasPlayerAndPortalsOnly) {
  const GameSpec& v1 = builtin_spec("myaliensv1");
  const WorldState s = reset(v1, 0, 5);
  const auto views = observe(s);
  int portals = 0;
  for (const auto& p : v1.levels[0].placements) portals += p.cls == "portal";
  EXPECT_EQ(static_cast<int>(views.size()), portals + 1);
  EXPECT_EQ(count_class(s, "alien"), 0);
}

TEST(ObserveTest, LostStateHasNoPlayer) {
  GameSpec spec = builtin_spec("myaliensv1");
  spec = with_level(spec, LevelDef{{{"avatar", {15, 19}}, {"alien", {15, 18}}}});
  WorldState s = reset(spec, 0, 1);
  step_in_place(s, 0);
  const Color avatar = spec.find_class("avatar")->color;
  for (const auto& v : observe(s)) EXPECT_NE(v.color, avatar);
}

TEST(RenderTest, EmptyGridIsUniformBackground) {
  WorldState s = reset(builtin_spec("spaceinvaders"), 0, 1);
  s.objects.clear();
  const PixelFrame f = render(s, 3);
  const Color bg = builtin_spec("spaceinvaders").background;
  ASSERT_EQ(f.width, 10 * 3);
  ASSERT_EQ(f.height, 26 * 3);
  for (std::size_t i = 0; i < f.pixels.size(); i += 3) {
    ASSERT_EQ(f.pixels[i], bg.r);
    ASSERT_EQ(f.pixels[i + 1], bg.g);
    ASSERT_EQ(f.pixels[i + 2], bg.b);
  }
}

TEST(RenderTest, IsDeterministic) {
  const WorldState s = reset(builtin_spec("myaliensv2"), 1, 9);
  EXPECT_EQ(render(s, 4), render(s, 4));
}

TEST(RenderTest, FrameSizeFollowsCellSize) {
  const WorldState s = reset(builtin_spec("roadrash"), 0, 9);
  for (int px : {1, 2, 5}) {
    const PixelFrame f = render(s, px);
    EXPECT_EQ(f.width, 4 * px);
    EXPECT_EQ(f.height, 16 * px);
    EXPECT_EQ(f.pixels.size(), static_cast<std::size_t>(f.width * f.height * 3));
  }
}

// Oracle: pixel diff plus object-list equality.
TEST(RenderTest, ImageVariantChangesPixelsButNotObjects) {
  for (const char* name : {"roadrash", "spaceinvaders"}) {
    const GameSpec& base = builtin_spec(name);
    const GameSpec mod = apply_variant(base, make_variant(base, VariantName::kModImage));
    const WorldState a = reset(base, 0, 4);
    const WorldState b = reset(mod, 0, 4);
    EXPECT_EQ(observe(a), observe(b)) << name;
    EXPECT_NE(render(a, 6), render(b, 6)) << name;
  }
}

TEST(RenderTest, PpmHeaderMatchesFrame) {
  const PixelFrame f = render(reset(builtin_spec("roadrash"), 0, 1), 2);
  std::ostringstream out;
  write_ppm(f, out);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("P6\n8 32\n255\n", 0), 0u);
  EXPECT_EQ(text.size(), std::string("P6\n8 32\n255\n").size() + f.pixels.size());
}

class BuiltinPropertyTest : public ::testing::TestWithParam<std::string> {};

TEST_P(BuiltinPropertyTest, TrajectoriesAreDeterministic) {
  const GameSpec& spec = builtin_spec(GetParam());
  GameEnv a(spec), b(spec);
  a.reset(17);
  b.reset(17);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 400; ++t) {
    const int key = static_cast<int>(rng() % spec.actions.size());
    const Transition ta = a.step(key);
    const Transition tb = b.step(key);
    ASSERT_EQ(ta.frame, tb.frame);
    ASSERT_EQ(ta.reward, tb.reward);
    ASSERT_EQ(a.state(), b.state());
    ASSERT_EQ(a.render(2), b.render(2));
    if (ta.done) {
      a.reset(t);
      b.reset(t);
    }
  }
}

TEST_P(BuiltinPropertyTest, StateInvariantsHoldUnderRandomPlay) {
  const GameSpec& spec = builtin_spec(GetParam());
  const auto game = compile(spec);
  std::set<int> moving;
  for (const auto& rule : spec.dynamics_rules) {
    std::visit([&](const auto& r) {
      using T = std::decay_t<decltype(r)>;
      if constexpr (std::is_same_v<T, PlayerRule> || std::is_same_v<T, MoveRule> ||
                    std::is_same_v<T, MarchRule>) {
        moving.insert(game->class_index(r.cls));
      }
    }, rule);
  }
  std::mt19937_64 rng(11);
  for (int episode = 0; episode < 5; ++episode) {
    GameEnv env(game);
    env.reset(rng());
    std::map<int, Cell> static_positions;
    for (const auto& o : env.state().objects) {
      if (!moving.count(o.class_index)) static_positions[o.instance_id] = o.position;
    }
    int max_id = -1;
    for (const auto& o : env.state().objects) max_id = std::max(max_id, o.instance_id);
    int rewards = 0;
    int level = 0;
    while (true) {
      const Transition t = env.step(static_cast<int>(rng() % spec.actions.size()));
      rewards += t.reward;
      EXPECT_EQ(t.score, rewards);
      const WorldState& s = env.state();
      if (t.level_won && !t.done) {
        ++level;
        static_positions.clear();
        for (const auto& o : s.objects) {
          if (!moving.count(o.class_index)) static_positions[o.instance_id] = o.position;
        }
      }
      for (const auto& o : s.objects) {
        ASSERT_TRUE(o.box().inside(spec.grid_width, spec.grid_height));
        ASSERT_EQ(o.bbox, spec.object_classes[o.class_index].size);
        if (auto it = static_positions.find(o.instance_id); it != static_positions.end()) {
          ASSERT_EQ(o.position, it->second) << "static object moved";
        }
      }
      for (std::size_t i = 1; i < s.objects.size(); ++i) {
        ASSERT_LT(s.objects[i - 1].instance_id, s.objects[i].instance_id);
      }
      if (!t.level_won) {
        for (const auto& e : t.events) {
          if (e.kind == Event::Kind::kSpawn) {
            EXPECT_GT(e.first, max_id) << "instance id reused";
            max_id = std::max(max_id, e.first);
          }
        }
      } else {
        // Ids restart with each level.
        max_id = -1;
        for (const auto& o : s.objects) max_id = std::max(max_id, o.instance_id);
      }
      if (s.status == Status::kRunning) {
        ASSERT_EQ(count_class(s, spec.player_class()), 1);
        ASSERT_LE(s.step_count, spec.termination.timeout);
      }
      if (t.done) {
        if (t.status == Status::kLost) EXPECT_EQ(s.player(), nullptr);
        break;
      }
    }
    EXPECT_LE(rewards, spec.max_score);
  }
}

INSTANTIATE_TEST_SUITE_P(Builtins, BuiltinPropertyTest,
                         ::testing::Values("myaliensv1", "myaliensv2", "roadrash",
                                           "spaceinvaders"));

TEST(SpaceInvadersTest, AtMostOneLiveLaser) {
  const GameSpec& spec = builtin_spec("spaceinvaders");
  GameEnv env(spec);
  env.reset(5);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 3000; ++t) {
    const Transition tr = env.step(rng() % 2 ? 3 : static_cast<int>(rng() % 4));
    ASSERT_LE(count_class(env.state(), "laser"), 1);
    if (tr.done) env.reset(rng());
  }
}

TEST(SpaceInvadersTest, WrapMarchSweepsEveryColumn) {
  std::string text(kTinyShooter);
  text.replace(text.find("bomb 0.1"), 8, "bomb 0");
  const GameSpec spec = parse(text);
  WorldState s = reset(spec, 0, 1);
  std::set<int> columns;
  const int target = s.game->class_index("target");
  for (int t = 0; t < 12 && s.status == Status::kRunning; ++t) {
    for (const auto& o : s.objects) {
      if (o.class_index == target && o.instance_id == 1) columns.insert(o.position.x);
    }
    step_in_place(s, 0);
  }
  EXPECT_EQ(columns.size(), 6u);
}

// Oracle: exhaustive search over all action sequences of shrunken levels.
TEST(MaxScoreTest, ShrunkenGamesNeverExceedTheRuleBound) {
  {
    const GameSpec shooter = parse(kTinyShooter);
    for (std::uint64_t seed : {1u, 2u}) {
      const int best = exhaustive_best_score(shooter, seed);
      EXPECT_LE(best, 2 * 10 + 250);
      EXPECT_GT(best, 0);
    }
  }
  {
    const GameSpec dodger = parse(kTinyDodger);
    EXPECT_LE(exhaustive_best_score(dodger, 3), 10);
  }
  {
    GameSpec v1 = builtin_spec("myaliensv1");
    v1.grid_width = 6;
    v1.grid_height = 5;
    v1.termination.timeout = 8;
    v1 = with_level(v1, LevelDef{{{"avatar", {2, 4}}, {"portal", {1, 0}}, {"portal", {4, 0}}}});
    EXPECT_LE(exhaustive_best_score(v1, 4), 50 / 5);
  }
  {
    GameSpec v2 = builtin_spec("myaliensv2");
    v2.grid_width = 6;
    v2.grid_height = 4;
    v2.termination.timeout = 9;
    v2 = with_level(v2, LevelDef{{{"avatar", {2, 3}}, {"larder", {1, 0}}, {"portal", {4, 0}}}});
    EXPECT_LE(exhaustive_best_score(v2, 4), 30 / 3);
  }
  {
    GameSpec rr = builtin_spec("roadrash");
    rr.termination.timeout = 7;
    const int best = exhaustive_best_score(rr, 2);
    EXPECT_LE(best, 7);
  }
}

TEST(TraceTest, WritesOneRecordPerLine) {
  std::ostringstream out;
  write_trace_line(out, 3, 1, -10, Status::kLost);
  EXPECT_EQ(out.str(), "3 1 -10 lost\n");
}

}  // namespace
}  // namespace afford

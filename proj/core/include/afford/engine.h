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

// Deterministic grid simulation of a GameSpec.
//
// A step applies, in order: the player's key, every dynamics rule in declared
// order, contact resolution (player contacts first), per-step rewards and the
// termination predicates. Objects spawned during a step do not move until the
// next one.

#ifndef AFFORD_ENGINE_H_
#define AFFORD_ENGINE_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "afford/gamespec.h"
#include "afford/geometry.h"

namespace afford {

// A GameSpec with class references resolved to indices.
class Game {
 public:
  explicit Game(GameSpec spec);

  const GameSpec& spec() const { return spec_; }
  int num_classes() const { return static_cast<int>(spec_.object_classes.size()); }
  int num_keys() const { return static_cast<int>(spec_.actions.size()); }
  int num_levels() const { return static_cast<int>(spec_.levels.size()); }
  int player_class() const { return player_class_; }
  int class_index(std::string_view id) const;
  const ObjectClassDef& class_def(int index) const { return spec_.object_classes[index]; }
  // Nominal per-step displacement that the dynamics give new instances.
  Cell nominal_velocity(int cls) const { return nominal_velocity_[cls]; }

  struct CompiledContact {
    int first;
    int second;
    int reward;
    Removal remove;
    int order;  // resolution priority: player contacts first, then declared
  };
  const std::vector<CompiledContact>& contacts() const { return contacts_; }
  // Indices into contacts() for an ordered class pair, empty if none.
  const std::vector<int>& contacts_for(int first, int second) const {
    return contact_table_[first * num_classes() + second];
  }

 private:
  GameSpec spec_;
  int player_class_ = 0;
  std::vector<Cell> nominal_velocity_;
  std::vector<CompiledContact> contacts_;
  std::vector<std::vector<int>> contact_table_;
};

std::shared_ptr<const Game> compile(GameSpec spec);

enum class Status { kRunning, kWon, kLost };
const char* to_string(Status status);

struct ObjectInstance {
  int instance_id = 0;
  int class_index = 0;
  Cell position;
  Extent bbox;
  Color color;
  Cell velocity;
  Box box() const { return {position, bbox}; }
  friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

struct WorldState {
  std::shared_ptr<const Game> game;
  std::vector<ObjectInstance> objects;  // ascending instance_id
  int score = 0;
  int level_index = 0;
  int step_count = 0;
  std::mt19937_64 rng;
  Status status = Status::kRunning;
  int next_instance_id = 0;
  std::vector<int> march_direction;  // one per dynamics rule, +1 or -1
  std::vector<int> march_progress;   // one per dynamics rule, shifts since the last drop
  std::vector<int> collected;        // per class, removed by player contact

  // Class id of an instance, e.g. "alien".
  const std::string& class_id(const ObjectInstance& obj) const;
  const ObjectInstance* player() const;
  friend bool operator==(const WorldState& a, const WorldState& b);
};

struct Event {
  enum class Kind { kContact, kSpawn, kDespawn };
  Kind kind = Kind::kContact;
  int first = -1;   // instance ids; `second` is -1 for spawn/despawn
  int second = -1;
  friend bool operator==(const Event&, const Event&) = default;
};

struct StepOutcome {
  int reward = 0;
  Status status_after = Status::kRunning;
  std::vector<Event> events;
};

// What downstream perception sees of an object: geometry and appearance, no
// class identity.
struct ObjectView {
  int instance_id = 0;
  Box box;
  Color color;
  Cell velocity;
  friend bool operator==(const ObjectView&, const ObjectView&) = default;
};

struct PixelFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB
  friend bool operator==(const PixelFrame&, const PixelFrame&) = default;
};

// Places objects for `level`. Throws ContractViolation if the level is out of
// range. `carried_score` seeds the score for multi-level runs.
WorldState reset(std::shared_ptr<const Game> game, int level, std::uint64_t seed,
                 int carried_score = 0);
WorldState reset(const GameSpec& spec, int level, std::uint64_t seed);

// Advances in place. Throws ContractViolation on a finished state or an
// action outside the key set.
StepOutcome step_in_place(WorldState& state, int action);
std::pair<WorldState, StepOutcome> step(const WorldState& state, int action);

std::vector<ObjectView> observe(const WorldState& state);

PixelFrame render(const WorldState& state, int cell_px);
void write_ppm(const PixelFrame& frame, std::ostream& out);

}  // namespace afford

#endif  // AFFORD_ENGINE_H_

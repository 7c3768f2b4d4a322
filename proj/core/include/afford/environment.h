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

// Episode-level environment interface shared by the learners and the probes.

#ifndef AFFORD_ENVIRONMENT_H_
#define AFFORD_ENVIRONMENT_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "afford/engine.h"

namespace afford {

using Frame = std::vector<ObjectView>;

struct Transition {
  Frame frame;        // observation after the step (next level's start on a level win)
  int reward = 0;
  bool done = false;  // lost, or the last level won
  bool level_won = false;
  Status status = Status::kRunning;  // status of the level that was stepped
  int score = 0;                      // cumulative episode score
  std::vector<Event> events;
};

// Anything the agent pipeline can probe: resettable, keyed, observable.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual int num_keys() const = 0;
  virtual Frame reset(std::uint64_t seed) = 0;
  virtual Transition step(int key) = 0;
};

// A GameSpec played as a multi-level episode: winning a level carries the
// score into the next one, losing (or winning the last level) ends it.
class GameEnv : public Environment {
 public:
  explicit GameEnv(std::shared_ptr<const Game> game);
  explicit GameEnv(const GameSpec& spec);

  int num_keys() const override { return game_->num_keys(); }
  Frame reset(std::uint64_t seed) override;
  Transition step(int key) override;

  const Game& game() const { return *game_; }
  const WorldState& state() const { return state_; }
  int episode_steps() const { return episode_steps_; }
  PixelFrame render(int cell_px) const { return afford::render(state_, cell_px); }

 private:
  std::shared_ptr<const Game> game_;
  WorldState state_;
  std::uint64_t seed_ = 0;
  int episode_steps_ = 0;
};

// One line per step: "<step> <action> <reward> <status>".
void write_trace_line(std::ostream& out, int step, int action, int reward,
                      Status status);

}  // namespace afford

#endif  // AFFORD_ENVIRONMENT_H_

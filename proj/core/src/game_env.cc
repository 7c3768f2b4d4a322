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

#include <ostream>

#include "afford/environment.h"
#include "afford/error.h"
#include "afford/seed.h"

namespace afford {

GameEnv::GameEnv(std::shared_ptr<const Game> game) : game_(std::move(game)) {
  state_ = afford::reset(game_, 0, 0);
}

GameEnv::GameEnv(const GameSpec& spec) : GameEnv(compile(spec)) {}

Frame GameEnv::reset(std::uint64_t seed) {
  seed_ = seed;
  episode_steps_ = 0;
  state_ = afford::reset(game_, 0, mix_seed(seed_, 0));
  return observe(state_);
}

Transition GameEnv::step(int key) {
  StepOutcome out = step_in_place(state_, key);
  ++episode_steps_;
  Transition t;
  t.reward = out.reward;
  t.status = out.status_after;
  t.events = std::move(out.events);
  t.score = state_.score;
  if (out.status_after == Status::kWon) {
    t.level_won = true;
    const int next = state_.level_index + 1;
    if (next < game_->num_levels()) {
      state_ = afford::reset(game_, next, mix_seed(seed_, next), state_.score);
    } else {
      t.done = true;
    }
  } else if (out.status_after == Status::kLost) {
    t.done = true;
  }
  t.frame = observe(state_);
  return t;
}

void write_trace_line(std::ostream& out, int step, int action, int reward,
                      Status status) {
  out << step << ' ' << action << ' ' << reward << ' ' << to_string(status) << '\n';
}

}  // namespace afford

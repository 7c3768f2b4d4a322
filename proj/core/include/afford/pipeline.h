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

// End-to-end agent pipeline: identify the agent, discover its keys, learn
// object categories, and turn frames into encoded state keys.

#ifndef AFFORD_PIPELINE_H_
#define AFFORD_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "afford/agent_id.h"
#include "afford/appearance.h"
#include "afford/encoder.h"
#include "afford/environment.h"
#include "afford/perception.h"

namespace afford {

class QTable;

// Tracks one episode's frames, keeps the category model up to date and
// encodes the current frame.
class Perceiver {
 public:
  Perceiver(AgentProfile profile, EncoderConfig config, int grid_width,
            CategoryModel model = {});

  // Begins an episode at `frame`.
  void start(const Frame& frame);
  // Consumes the transition produced by pressing `key`.
  void observe(int key, const Transition& t);

  // Key of the current frame; while the agent is off screen the last
  // encoded state is kept.
  std::uint64_t state_key() const { return key_; }
  const EncodedState& state() const { return state_; }
  bool agent_visible() const { return agent_box_.has_value(); }

  void set_learning(bool on) { learning_ = on; }
  const CategoryModel& model() const { return model_; }
  const AgentProfile& profile() const { return profile_; }
  const EncoderConfig& config() const { return config_; }

 private:
  void encode_current();

  AgentProfile profile_;
  EncoderConfig config_;
  int grid_width_;
  CategoryModel model_;
  bool learning_ = true;
  Frame frame_;
  std::optional<Box> agent_box_;
  EncodedState state_;
  std::uint64_t key_ = 0;
};

struct PipelineOptions {
  IdentifyOptions identify;
  BindingOptions binding;
  int calibration_steps = 5000;  // random steps used to seed the category model
  std::uint64_t seed = 0;
};

struct PipelineResult {
  AgentProfile profile;
  BiasReport report;
  CategoryModel model;
};

// Identification, key binding and category calibration on `env`.
PipelineResult run_pipeline(Environment& env, const PipelineOptions& options = {});

// Category model after `steps` uniformly random keys.
CategoryModel calibrate(Environment& env, const AgentProfile& profile, int steps,
                        std::uint64_t seed, CategoryModel model = {});

struct EvalResult {
  std::vector<int> scores;           // one per run
  std::int64_t steps = 0;
  std::int64_t unseen_steps = 0;     // steps whose state key the table never saw
  std::vector<std::uint64_t> keys;   // state-key stream, when requested
};

// Greedy episodes with a frozen table; the category model keeps learning
// within each run. Run r uses seed mix_seed(seed, r).
EvalResult evaluate_greedy(Environment& env, const Perceiver& perceiver, const QTable& table,
                           int runs, std::uint64_t seed, bool record_keys = false);

// Episodes under uniformly random keys.
std::vector<int> evaluate_random(Environment& env, int runs, std::uint64_t seed);

}  // namespace afford

#endif  // AFFORD_PIPELINE_H_

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

#include "afford/pipeline.h"

#include <numeric>
#include <random>

#include "afford/qlearner.h"
#include "afford/seed.h"

namespace afford {

namespace {

const ObjectView* find_agent(const Frame& frame, const AppearanceSignature& sig) {
  for (const auto& v : frame) {
    if (signature_of(v) == sig) return &v;
  }
  return nullptr;
}

}  // namespace

Perceiver::Perceiver(AgentProfile profile, EncoderConfig config, int grid_width,
                     CategoryModel model)
    : profile_(std::move(profile)),
      config_(std::move(config)),
      grid_width_(grid_width),
      model_(std::move(model)) {
  validate(config_);
  model_.set_agent(profile_.signature);
  state_ = unpack(0, config_);
}

void Perceiver::start(const Frame& frame) {
  frame_ = frame;
  encode_current();
}

void Perceiver::observe(int key, const Transition& t) {
  if (learning_) {
    const ObjectView* agent = find_agent(frame_, profile_.signature);
    std::vector<ContactEvidence> contacts;
    if (agent) contacts = agent_contacts(frame_, t, agent->instance_id);
    std::optional<TrackedObjects> tracked;
    if (!t.level_won) tracked = track(frame_, t.frame);
    StepObservation obs;
    obs.prev = &frame_;
    obs.cur = &t.frame;
    obs.tracked = tracked ? &*tracked : nullptr;
    obs.contacts = contacts;
    obs.fired = key >= 0 && key < static_cast<int>(profile_.key_map.size()) &&
                profile_.key_map[key] == KeyEffect::kFire;
    if (agent) obs.agent_box = agent->box;
    model_.update(obs);
  }
  frame_ = t.frame;
  encode_current();
}

void Perceiver::encode_current() {
  const ObjectView* agent = find_agent(frame_, profile_.signature);
  if (!agent) {
    agent_box_.reset();
    return;
  }
  agent_box_ = agent->box;
  std::vector<CategorizedObject> objects;
  objects.reserve(frame_.size());
  for (const auto& v : frame_) {
    if (&v == agent) continue;
    objects.push_back({model_.classify(signature_of(v)), v.box, v.velocity});
  }
  state_ = encode(objects, *agent_box_, grid_width_, config_);
  key_ = afford::state_key(state_);
}

CategoryModel calibrate(Environment& env, const AgentProfile& profile, int steps,
                        std::uint64_t seed, CategoryModel model) {
  Perceiver perceiver(profile, EncoderConfig{}, 1 << 20, std::move(model));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> key(0, env.num_keys() - 1);
  std::uint64_t episode = 0;
  perceiver.start(env.reset(mix_seed(seed, episode++)));
  for (int i = 0; i < steps; ++i) {
    const int k = key(rng);
    const Transition t = env.step(k);
    perceiver.observe(k, t);
    if (t.done) perceiver.start(env.reset(mix_seed(seed, episode++)));
  }
  return perceiver.model();
}

PipelineResult run_pipeline(Environment& env, const PipelineOptions& options) {
  IdentifyOptions identify = options.identify;
  identify.seed = mix_seed(options.seed, 1);
  BindingOptions binding = options.binding;
  binding.seed = mix_seed(options.seed, 2);
  Identification id = identify_agent(env, identify);
  PipelineResult out;
  out.profile = id.profile;
  out.report = std::move(id.report);
  out.profile.key_map = discover_key_bindings(env, out.profile.signature, binding);
  out.model = calibrate(env, out.profile, options.calibration_steps, mix_seed(options.seed, 3));
  return out;
}

EvalResult evaluate_greedy(Environment& env, const Perceiver& perceiver, const QTable& table,
                           int runs, std::uint64_t seed, bool record_keys) {
  EvalResult out;
  std::vector<int> actions(env.num_keys());
  std::iota(actions.begin(), actions.end(), 0);
  for (int r = 0; r < runs; ++r) {
    const std::uint64_t run_seed = mix_seed(seed, static_cast<std::uint64_t>(r));
    std::mt19937_64 rng(run_seed);
    Perceiver p = perceiver;
    p.start(env.reset(run_seed));
    while (true) {
      const std::uint64_t s = p.state_key();
      if (record_keys) out.keys.push_back(s);
      ++out.steps;
      if (!table.contains(s)) ++out.unseen_steps;
      const int a = select_action(table, s, actions, 0.0, rng);
      const Transition t = env.step(a);
      p.observe(a, t);
      if (t.done) {
        out.scores.push_back(t.score);
        break;
      }
    }
  }
  return out;
}

std::vector<int> evaluate_random(Environment& env, int runs, std::uint64_t seed) {
  std::vector<int> scores;
  for (int r = 0; r < runs; ++r) {
    const std::uint64_t run_seed = mix_seed(seed, static_cast<std::uint64_t>(r));
    std::mt19937_64 rng(run_seed);
    std::uniform_int_distribution<int> key(0, env.num_keys() - 1);
    env.reset(run_seed);
    while (true) {
      const Transition t = env.step(key(rng));
      if (t.done) {
        scores.push_back(t.score);
        break;
      }
    }
  }
  return scores;
}

}  // namespace afford

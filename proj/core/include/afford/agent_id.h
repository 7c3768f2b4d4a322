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

// Finding the controllable object from observation and probing alone.
//
// Three priors are tried in order and identification stops at the first one
// that leaves a single candidate: the agent looks unique, the agent is always
// on screen, and only the agent moves in step with key presses.

#ifndef AFFORD_AGENT_ID_H_
#define AFFORD_AGENT_ID_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "afford/appearance.h"
#include "afford/environment.h"

namespace afford {

enum class Bias { kUniqueness, kPermanence, kMotionBinding };
const char* to_string(Bias bias);

struct BiasReport {
  Bias bias_used = Bias::kUniqueness;
  std::vector<AppearanceSignature> initial;  // every signature in the window
  // One entry per stage that ran; never grows from one stage to the next.
  std::vector<std::vector<AppearanceSignature>> candidates_after_each_stage;
};

struct IdentifyOptions {
  int window = 50;   // frames observed under random keys
  int trials = 10;   // presses per key for the motion-binding test
  double consistency = 0.8;
  std::uint64_t seed = 0;
};

// Signatures that never appear more than once in any frame.
std::vector<AppearanceSignature> filter_unique(std::span<const Frame> frames);

// Candidates present in every frame.
std::vector<AppearanceSignature> filter_permanent(
    std::span<const Frame> frames, const std::vector<AppearanceSignature>& candidates);

// Presses every key `trials` times, each press from a fresh reset, and keeps
// candidates whose displacement is consistent per key and differs between
// keys. Throws IdentificationFailed or AmbiguousAgent unless exactly one
// candidate passes.
AppearanceSignature motion_binding_test(Environment& env,
                                        const std::vector<AppearanceSignature>& candidates,
                                        const IdentifyOptions& options);

// Observation frames collected under uniformly random keys; terminal frames
// are skipped and the environment is reset.
std::vector<Frame> observe_window(Environment& env, int window, std::uint64_t seed);

struct Identification {
  AgentProfile profile;  // key_map left empty
  BiasReport report;
};

Identification identify_agent(Environment& env, const IdentifyOptions& options = {});

struct BindingOptions {
  int presses = 5;
  int fire_threshold = 3;
  std::uint64_t seed = 0;
};

// One KeyEffect per key. A key moves the agent if one displacement dominates
// its presses; it fires if, without moving the agent, a new object appears
// within one cell of it on at least `fire_threshold` presses.
std::vector<KeyEffect> discover_key_bindings(Environment& env,
                                             const AppearanceSignature& agent,
                                             const BindingOptions& options = {});

// Human-readable pipeline trace: stages, bias used, agent and key map.
std::string format_report(const BiasReport& report, const AgentProfile& profile);

}  // namespace afford

#endif  // AFFORD_AGENT_ID_H_

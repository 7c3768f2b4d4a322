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

// Compact categorical state: per-plane orientation bits around the agent,
// two boundary bits and an optional agent-bullet bit.

#ifndef AFFORD_ENCODER_H_
#define AFFORD_ENCODER_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "afford/geometry.h"
#include "afford/perception.h"

namespace afford {

struct EncoderConfig {
  int k = 4;                                      // horizontal half-width in cells
  std::vector<Category> planes = {Category::kMovingBad};  // MovingBad / MovingGood
  bool has_bullet_bit = false;
  int agent_steps_per_cell = 1;
  int slack = 1;
  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

// Throws ContractViolation on k < 1, empty or invalid planes, or more than 64 bits.
void validate(const EncoderConfig& config);

int total_bits(const EncoderConfig& config);

struct EncodedState {
  // planes[p][i + k] is the bit for offset i in [-k, k].
  std::vector<std::vector<bool>> planes;
  bool at_left = false;
  bool at_right = false;
  bool has_bullet_bit = false;
  bool bullet = false;
  friend bool operator==(const EncodedState&, const EncodedState&) = default;
};

struct CategorizedObject {
  Category category = Category::kUnknown;
  Box box;
  Cell velocity;
};

// Bit i of a plane is set when an object of that plane, moved along its
// velocity for t steps with t <= |i| * agent_steps_per_cell + slack, covers
// column agent.left() + i on one of the agent's rows. Unknown objects count
// as MovingBad.
EncodedState encode(std::span<const CategorizedObject> objects, const Box& agent,
                    int grid_width, const EncoderConfig& config);

// Plane-major, offsets ascending from the least significant bit, then
// at_left, at_right, then the bullet bit.
std::uint64_t state_key(const EncodedState& state);
EncodedState unpack(std::uint64_t key, const EncoderConfig& config);

// Defaults per built-in game.
std::map<std::string, EncoderConfig> builtin_encoder_configs();

// Throws ContractViolation for an unknown game.
EncoderConfig builtin_encoder_config(const std::string& game);

// The single-plane 25-offset layout (k = 12). Learning over it is slow; it
// exists to reproduce that result.
EncoderConfig wide_encoder_config();

}  // namespace afford

#endif  // AFFORD_ENCODER_H_

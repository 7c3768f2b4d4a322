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

#include <algorithm>
#include <cstdlib>

#include "afford/error.h"

namespace afford {

namespace {

bool in_plane(Category plane, Category object) {
  if (plane == Category::kMovingBad) {
    return object == Category::kMovingBad || object == Category::kUnknown;
  }
  return object == plane;
}

bool reaches(const CategorizedObject& o, const Box& agent, int column, int horizon) {
  for (int t = 0; t <= horizon; ++t) {
    const Box b{o.box.origin + Cell{o.velocity.x * t, o.velocity.y * t}, o.box.extent};
    if (b.left() <= column && column < b.right() && b.top() < agent.bottom() &&
        agent.top() < b.bottom()) {
      return true;
    }
    if (o.velocity == Cell{}) break;
  }
  return false;
}

}  // namespace

void validate(const EncoderConfig& config) {
  if (config.k < 1) throw ContractViolation("encoder k must be at least 1");
  if (config.planes.empty()) throw ContractViolation("encoder needs at least one plane");
  for (std::size_t i = 0; i < config.planes.size(); ++i) {
    const Category c = config.planes[i];
    if (c != Category::kMovingBad && c != Category::kMovingGood) {
      throw ContractViolation(std::string("encoder plane must be moving_bad or moving_good, got ") +
                              to_string(c));
    }
    if (std::count(config.planes.begin(), config.planes.end(), c) > 1) {
      throw ContractViolation("duplicate encoder plane");
    }
  }
  if (config.agent_steps_per_cell < 1 || config.slack < 0) {
    throw ContractViolation("encoder timing parameters out of range");
  }
  if (total_bits(config) > 64) throw ContractViolation("encoder layout exceeds 64 bits");
}

int total_bits(const EncoderConfig& config) {
  return static_cast<int>(config.planes.size()) * (2 * config.k + 1) + 2 +
         (config.has_bullet_bit ? 1 : 0);
}

EncodedState encode(std::span<const CategorizedObject> objects, const Box& agent,
                    int grid_width, const EncoderConfig& config) {
  if (agent.left() < 0 || agent.right() > grid_width) {
    throw ContractViolation("agent outside the grid");
  }
  const int k = config.k;
  EncodedState out;
  out.planes.assign(config.planes.size(), std::vector<bool>(2 * k + 1, false));
  for (std::size_t p = 0; p < config.planes.size(); ++p) {
    for (int i = -k; i <= k; ++i) {
      const int column = agent.left() + i;
      if (column < 0 || column >= grid_width) continue;
      const int horizon = std::abs(i) * config.agent_steps_per_cell + config.slack;
      for (const auto& o : objects) {
        if (in_plane(config.planes[p], o.category) && reaches(o, agent, column, horizon)) {
          out.planes[p][i + k] = true;
          break;
        }
      }
    }
  }
  out.at_left = agent.left() == 0;
  out.at_right = agent.right() == grid_width;
  out.has_bullet_bit = config.has_bullet_bit;
  if (config.has_bullet_bit) {
    out.bullet = std::any_of(objects.begin(), objects.end(), [](const CategorizedObject& o) {
      return o.category == Category::kAgentObject;
    });
  }
  return out;
}

std::uint64_t state_key(const EncodedState& state) {
  std::uint64_t key = 0;
  int bit = 0;
  auto put = [&](bool v) {
    if (v) key |= std::uint64_t{1} << bit;
    ++bit;
  };
  for (const auto& plane : state.planes) {
    for (bool v : plane) put(v);
  }
  put(state.at_left);
  put(state.at_right);
  if (state.has_bullet_bit) put(state.bullet);
  return key;
}

EncodedState unpack(std::uint64_t key, const EncoderConfig& config) {
  validate(config);
  EncodedState out;
  int bit = 0;
  auto get = [&]() { return ((key >> bit++) & 1) != 0; };
  out.planes.assign(config.planes.size(), std::vector<bool>(2 * config.k + 1, false));
  for (auto& plane : out.planes) {
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = get();
  }
  out.at_left = get();
  out.at_right = get();
  out.has_bullet_bit = config.has_bullet_bit;
  if (config.has_bullet_bit) out.bullet = get();
  return out;
}

std::map<std::string, EncoderConfig> builtin_encoder_configs() {
  std::map<std::string, EncoderConfig> out;
  out["myaliensv1"] = {4, {Category::kMovingBad}, false, 1, 1};
  out["myaliensv2"] = {4, {Category::kMovingBad, Category::kMovingGood}, false, 1, 1};
  out["roadrash"] = {2, {Category::kMovingBad}, false, 1, 1};
  out["spaceinvaders"] = {4, {Category::kMovingBad}, true, 1, 1};
  return out;
}

EncoderConfig builtin_encoder_config(const std::string& game) {
  const auto configs = builtin_encoder_configs();
  auto it = configs.find(game);
  if (it == configs.end()) throw ContractViolation("no encoder config for game '" + game + "'");
  return it->second;
}

EncoderConfig wide_encoder_config() { return {12, {Category::kMovingBad}, false, 1, 1}; }

}  // namespace afford

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

#ifndef AFFORD_APPEARANCE_H_
#define AFFORD_APPEARANCE_H_

#include <compare>
#include <string>
#include <vector>

#include "afford/engine.h"
#include "afford/geometry.h"

namespace afford {

// The (color, size) key objects are recognized by. Equality is exact.
struct AppearanceSignature {
  Color color;
  Extent size;
  friend auto operator<=>(const AppearanceSignature&, const AppearanceSignature&) = default;
};

inline AppearanceSignature signature_of(const ObjectView& view) {
  return {view.color, view.box.extent};
}

// "r,g,b WxH"
std::string to_string(const AppearanceSignature& sig);

// What pressing a key does to the agent, as discovered by probing.
enum class KeyEffect { kMoveLeft, kMoveRight, kMoveUp, kMoveDown, kFire, kNoEffect };

const char* to_string(KeyEffect effect);

struct AgentProfile {
  AppearanceSignature signature;
  int instance_handle = -1;        // index in the frame it was identified in
  std::vector<KeyEffect> key_map;  // one entry per key; empty until discovered
  friend bool operator==(const AgentProfile&, const AgentProfile&) = default;
};

}  // namespace afford

#endif  // AFFORD_APPEARANCE_H_

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

// The four shipped games, embedded from games/*.game at configure time.

#include <map>
#include <string>
#include <string_view>

#include "afford/error.h"
#include "afford/gamespec.h"

namespace afford {

namespace {

struct Source {
  std::string_view name;
  std::string_view text;
};

constexpr Source kSources[] = {
#include "builtin_games.inc"
};

}  // namespace

std::string_view builtin_source(std::string_view name) {
  for (const auto& s : kSources) {
    if (s.name == name) return s.text;
  }
  throw SemanticError("unknown built-in game '" + std::string(name) + "'");
}

const std::map<std::string, GameSpec>& builtin_specs() {
  static const std::map<std::string, GameSpec> specs = [] {
    std::map<std::string, GameSpec> out;
    for (const auto& s : kSources) out.emplace(std::string(s.name), parse(s.text));
    return out;
  }();
  return specs;
}

const GameSpec& builtin_spec(std::string_view name) {
  const auto& specs = builtin_specs();
  auto it = specs.find(std::string(name));
  if (it == specs.end()) {
    throw SemanticError("unknown built-in game '" + std::string(name) + "'");
  }
  return it->second;
}

}  // namespace afford

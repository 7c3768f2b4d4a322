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

// Declarative game definitions: the data model, the text format, the
// generalization variants and the four built-in games.

#ifndef AFFORD_GAMESPEC_H_
#define AFFORD_GAMESPEC_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "afford/geometry.h"

namespace afford {

enum class Renderer { kFlatRect, kSprite };

struct ObjectClassDef {
  std::string id;
  Color color;
  Extent size;
  std::string sprite;
  // Drawn sprite extent as a percentage of the cell footprint. Only the
  // sprite renderer looks at it; dynamics always use `size`.
  int scale_percent = 100;
  friend bool operator==(const ObjectClassDef&, const ObjectClassDef&) = default;
};

// What a key does to the player-controlled object.
struct KeyDef {
  enum class Kind { kNoop, kMove, kFire };
  Kind kind = Kind::kNoop;
  Cell delta;               // kMove: displacement; kFire: spawn offset
  std::string spawn_class;  // kFire only
  int max_live = 1;         // kFire only: live projectiles allowed at once
  friend bool operator==(const KeyDef&, const KeyDef&) = default;
};

enum class EdgeMode { kClamp, kWrap };

// Marks the one class driven by keys.
struct PlayerRule {
  std::string cls;
  EdgeMode edge = EdgeMode::kClamp;
  friend bool operator==(const PlayerRule&, const PlayerRule&) = default;
};

// Linear motion by `delta` every `period` steps; objects leaving the grid are
// removed. Covers falling aliens, lane traffic and projectiles.
struct MoveRule {
  std::string cls;
  Cell delta;
  int period = 1;
  friend bool operator==(const MoveRule&, const MoveRule&) = default;
};

// Formation march: the whole class shifts one cell sideways every `period`
// steps. Bouncing marches drop `drop` rows and reverse when any member would
// leave the grid; wrapping marches move right around the grid edge and drop
// after every full lap.
struct MarchRule {
  std::string cls;
  int period = 1;
  int drop = 1;
  bool wrap = false;
  friend bool operator==(const MarchRule&, const MarchRule&) = default;
};

// Every instance of `source` independently spawns `cls` at its own position
// plus `offset` with probability `rate` per step.
struct SpawnRule {
  std::string source;
  std::string cls;
  double rate = 0.0;
  Cell offset;
  friend bool operator==(const SpawnRule&, const SpawnRule&) = default;
};

// With probability `rate` per step, spawns `cls` on `row` at a column drawn
// uniformly from `columns`.
struct SpawnRandomRule {
  std::string cls;
  double rate = 0.0;
  int row = 0;
  std::vector<int> columns;
  friend bool operator==(const SpawnRandomRule&, const SpawnRandomRule&) = default;
};

// With probability `rate` per step, one uniformly chosen `shooter` instance
// fires `cls` from its position plus `offset`.
struct ShootRule {
  std::string shooter;
  std::string cls;
  double rate = 0.0;
  Cell offset;
  friend bool operator==(const ShootRule&, const ShootRule&) = default;
};

using DynamicsRule = std::variant<PlayerRule, MoveRule, MarchRule, SpawnRule,
                                  SpawnRandomRule, ShootRule>;

enum class Removal { kNone, kFirst, kSecond, kBoth };

// Overlap of an object of class `first` with one of class `second`.
struct ContactRule {
  std::string first;
  std::string second;
  int reward = 0;
  Removal remove = Removal::kNone;
  friend bool operator==(const ContactRule&, const ContactRule&) = default;
};

struct RewardDef {
  std::vector<ContactRule> contacts;
  int per_step = 0;  // paid on every step the player survives
  int on_win = 0;    // paid when a level is won
  int on_lose = 0;   // paid when the episode is lost
  friend bool operator==(const RewardDef&, const RewardDef&) = default;
};

enum class Outcome { kWin, kLose };

struct CollectGoal {
  std::string cls;
  int count = 0;
  friend bool operator==(const CollectGoal&, const CollectGoal&) = default;
};

struct ReachLimit {
  std::string cls;
  int row = 0;
  friend bool operator==(const ReachLimit&, const ReachLimit&) = default;
};

struct TerminationDef {
  int timeout = 0;  // steps per level; 0 disables
  Outcome timeout_outcome = Outcome::kLose;
  std::vector<CollectGoal> collect;  // win: enough removed by player contact
  std::vector<std::string> clear;    // win: no instance left
  std::vector<ReachLimit> reach;     // lose: an instance's bottom row >= row
  friend bool operator==(const TerminationDef&, const TerminationDef&) = default;
};

struct Placement {
  std::string cls;
  Cell position;
  friend bool operator==(const Placement&, const Placement&) = default;
};

struct LevelDef {
  std::vector<Placement> placements;
  friend bool operator==(const LevelDef&, const LevelDef&) = default;
};

struct PositionDecl {
  double fraction = 0.5;
  int row_min = 0;
  int row_max = 0;
  std::vector<std::string> classes;
  friend bool operator==(const PositionDecl&, const PositionDecl&) = default;
};

struct ColorSizeEntry {
  std::string cls;
  Color color;
  Extent size;
  int scale_percent = 100;
  friend bool operator==(const ColorSizeEntry&, const ColorSizeEntry&) = default;
};

struct ImageEntry {
  std::string cls;
  std::string sprite;
  friend bool operator==(const ImageEntry&, const ImageEntry&) = default;
};

struct VariantDecls {
  std::optional<PositionDecl> position;
  std::map<std::string, std::vector<ColorSizeEntry>> colorsize;
  std::map<std::string, std::vector<ImageEntry>> image;
  friend bool operator==(const VariantDecls&, const VariantDecls&) = default;
};

struct GameSpec {
  std::string name;
  Renderer renderer = Renderer::kFlatRect;
  int max_score = 0;
  int grid_width = 0;
  int grid_height = 0;
  Color background;
  std::vector<ObjectClassDef> object_classes;
  std::vector<KeyDef> actions;
  std::vector<DynamicsRule> dynamics_rules;
  RewardDef rewards;
  TerminationDef termination;
  std::vector<LevelDef> levels;
  VariantDecls variants;

  const ObjectClassDef* find_class(std::string_view id) const;
  // The class carrying the player marker; throws SemanticError if missing.
  const std::string& player_class() const;

  friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

// Parses the line-oriented game format (docs/gamespec.md). Throws SyntaxError
// for malformed text and SemanticError for invariant violations.
GameSpec parse(std::string_view text);

// Canonical form: byte-stable, and parse(serialize(s)) == s.
std::string serialize(const GameSpec& spec);

// Throws SemanticError naming the first violated invariant.
void validate(const GameSpec& spec);

// ---- variants --------------------------------------------------------------

struct BaseVariant {
  friend bool operator==(const BaseVariant&, const BaseVariant&) = default;
};
struct ModPosition {
  std::uint64_t seed = 0;
  std::optional<double> fraction;  // overrides the game's declared fraction
  friend bool operator==(const ModPosition&, const ModPosition&) = default;
};
struct ModColorSize {
  std::vector<ColorSizeEntry> table;
  friend bool operator==(const ModColorSize&, const ModColorSize&) = default;
};
struct ModImage {
  std::vector<ImageEntry> table;
  friend bool operator==(const ModImage&, const ModImage&) = default;
};

using VariantKind = std::variant<BaseVariant, ModPosition, ModColorSize, ModImage>;

enum class VariantName { kBase, kModPosition, kModColorSize, kModImage };

std::string_view to_string(VariantName name);
// Accepts "base", "mod-position", "mod-colorsize", "mod-image".
VariantName parse_variant_name(std::string_view text);
VariantName name_of(const VariantKind& kind);

// Rewrites `spec` into the requested variant. Throws NotApplicable for
// combinations the game cannot express (image swaps on flat-rectangle games,
// position shuffles on games without placed movers).
GameSpec apply_variant(const GameSpec& spec, const VariantKind& kind);

bool variant_applicable(const GameSpec& spec, VariantName name);

// Builds the variant from the game's shipped presets ("default").
VariantKind make_variant(const GameSpec& spec, VariantName name,
                         std::uint64_t seed = 0);

// ---- built-in games --------------------------------------------------------

// myaliensv1, myaliensv2, roadrash, spaceinvaders.
const std::map<std::string, GameSpec>& builtin_specs();
const GameSpec& builtin_spec(std::string_view name);
// Source text of a built-in game, as shipped.
std::string_view builtin_source(std::string_view name);

}  // namespace afford

#endif  // AFFORD_GAMESPEC_H_

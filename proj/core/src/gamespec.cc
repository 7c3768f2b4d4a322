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

#include <charconv>
#include <set>
#include <sstream>
#include <string>

#include "afford/error.h"
#include "afford/gamespec.h"

namespace afford {

namespace {

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_color(Color c) {
  return std::to_string(c.r) + "," + std::to_string(c.g) + "," +
         std::to_string(c.b);
}

std::string format_extent(Extent e) {
  return std::to_string(e.width) + "x" + std::to_string(e.height);
}

const char* format_removal(Removal r) {
  switch (r) {
    case Removal::kNone: return "none";
    case Removal::kFirst: return "first";
    case Removal::kSecond: return "second";
    case Removal::kBoth: return "both";
  }
  return "none";
}

struct RuleWriter {
  std::ostringstream& out;
  void operator()(const PlayerRule& r) {
    out << "player " << r.cls << ' '
        << (r.edge == EdgeMode::kWrap ? "wrap" : "clamp") << '\n';
  }
  void operator()(const MoveRule& r) {
    out << "move " << r.cls << ' ' << r.delta.x << ' ' << r.delta.y << ' '
        << r.period << '\n';
  }
  void operator()(const MarchRule& r) {
    out << "march " << r.cls << ' ' << r.period << ' ' << r.drop << (r.wrap ? " wrap" : "")
        << '\n';
  }
  void operator()(const SpawnRule& r) {
    out << "spawn " << r.source << ' ' << r.cls << ' ' << format_double(r.rate)
        << ' ' << r.offset.x << ' ' << r.offset.y << '\n';
  }
  void operator()(const SpawnRandomRule& r) {
    out << "spawn_random " << r.cls << ' ' << format_double(r.rate) << ' '
        << r.row << ' ';
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
      out << (i ? "," : "") << r.columns[i];
    }
    out << '\n';
  }
  void operator()(const ShootRule& r) {
    out << "shoot " << r.shooter << ' ' << r.cls << ' ' << format_double(r.rate)
        << ' ' << r.offset.x << ' ' << r.offset.y << '\n';
  }
};

// Collects the class names a rule refers to.
struct RuleClasses {
  std::vector<std::string>& out;
  void operator()(const PlayerRule& r) { out.push_back(r.cls); }
  void operator()(const MoveRule& r) { out.push_back(r.cls); }
  void operator()(const MarchRule& r) { out.push_back(r.cls); }
  void operator()(const SpawnRule& r) {
    out.push_back(r.source);
    out.push_back(r.cls);
  }
  void operator()(const SpawnRandomRule& r) { out.push_back(r.cls); }
  void operator()(const ShootRule& r) {
    out.push_back(r.shooter);
    out.push_back(r.cls);
  }
};

}  // namespace

const ObjectClassDef* GameSpec::find_class(std::string_view id) const {
  for (const auto& c : object_classes) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const std::string& GameSpec::player_class() const {
  for (const auto& rule : dynamics_rules) {
    if (const auto* p = std::get_if<PlayerRule>(&rule)) return p->cls;
  }
  throw SemanticError("missing player marker: no class is player-controlled");
}

void validate(const GameSpec& spec) {
  if (spec.name.empty()) throw SemanticError("game name is empty");
  if (spec.grid_width < 1 || spec.grid_height < 1) {
    throw SemanticError("zero grid: grid dimensions must be >= 1 (got " +
                        std::to_string(spec.grid_width) + "x" +
                        std::to_string(spec.grid_height) + ")");
  }
  if (spec.max_score <= 0) throw SemanticError("max_score must be > 0");

  std::set<std::string> declared;
  for (const auto& c : spec.object_classes) {
    if (!declared.insert(c.id).second) {
      throw SemanticError("duplicate class '" + c.id + "'");
    }
    if (c.size.width < 1 || c.size.height < 1) {
      throw SemanticError("class '" + c.id + "' has a size component < 1");
    }
    if (c.scale_percent < 1 || c.scale_percent > 100) {
      throw SemanticError("class '" + c.id + "' scale must be in [1, 100]");
    }
  }
  auto require = [&](const std::string& cls, const std::string& where) {
    if (!declared.count(cls)) {
      throw SemanticError("undeclared class '" + cls + "' in " + where);
    }
  };

  int players = 0;
  for (const auto& rule : spec.dynamics_rules) {
    std::vector<std::string> refs;
    std::visit(RuleClasses{refs}, rule);
    for (const auto& r : refs) require(r, "dynamics");
    if (std::holds_alternative<PlayerRule>(rule)) ++players;
    if (const auto* m = std::get_if<MoveRule>(&rule); m && m->period < 1) {
      throw SemanticError("move period for '" + m->cls + "' must be >= 1");
    }
    if (const auto* m = std::get_if<MarchRule>(&rule);
        m && (m->period < 1 || m->drop < 0)) {
      throw SemanticError("march rule for '" + m->cls + "' is malformed");
    }
    if (const auto* m = std::get_if<MarchRule>(&rule); m && m->wrap) {
      const ObjectClassDef* def = spec.find_class(m->cls);
      if (def && def->size.width != 1) {
        throw SemanticError("wrapping march needs one-cell-wide '" + m->cls + "'");
      }
    }
    auto check_rate = [](double rate, const std::string& cls) {
      if (!(rate >= 0.0 && rate <= 1.0)) {
        throw SemanticError("spawn rate for '" + cls + "' outside [0, 1]");
      }
    };
    if (const auto* s = std::get_if<SpawnRule>(&rule)) check_rate(s->rate, s->cls);
    if (const auto* s = std::get_if<ShootRule>(&rule)) check_rate(s->rate, s->cls);
    if (const auto* s = std::get_if<SpawnRandomRule>(&rule)) {
      check_rate(s->rate, s->cls);
      if (s->columns.empty()) {
        throw SemanticError("spawn_random for '" + s->cls + "' has no columns");
      }
    }
  }
  if (players == 0) {
    throw SemanticError("missing player marker: no class is player-controlled");
  }
  if (players > 1) {
    throw SemanticError("more than one class carries the player marker");
  }
  const std::string& player = spec.player_class();

  if (spec.actions.empty()) throw SemanticError("action set is empty");
  for (const auto& key : spec.actions) {
    if (key.kind == KeyDef::Kind::kFire) {
      require(key.spawn_class, "keys");
      if (key.max_live < 1) throw SemanticError("fire key max must be >= 1");
    }
  }

  for (const auto& c : spec.rewards.contacts) {
    require(c.first, "rewards");
    require(c.second, "rewards");
  }

  const auto& t = spec.termination;
  if (t.timeout < 0) throw SemanticError("timeout must be > 0");
  for (const auto& g : t.collect) {
    require(g.cls, "termination");
    if (g.count < 1) throw SemanticError("collect count must be >= 1");
  }
  for (const auto& c : t.clear) require(c, "termination");
  for (const auto& r : t.reach) require(r.cls, "termination");

  if (spec.levels.empty()) throw SemanticError("no levels declared");
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    const std::string where = "level " + std::to_string(i + 1);
    int player_count = 0;
    for (const auto& p : spec.levels[i].placements) {
      require(p.cls, where);
      const ObjectClassDef* def = spec.find_class(p.cls);
      const Box box{p.position, def->size};
      if (!box.inside(spec.grid_width, spec.grid_height)) {
        throw SemanticError("placement of '" + p.cls + "' outside the grid in " +
                            where);
      }
      if (p.cls == player) ++player_count;
    }
    if (player_count != 1) {
      throw SemanticError(where + " must place exactly one '" + player + "'");
    }
  }

  if (const auto& pos = spec.variants.position) {
    for (const auto& c : pos->classes) require(c, "variants");
    if (!(pos->fraction >= 0.0 && pos->fraction <= 1.0)) {
      throw SemanticError("position fraction outside [0, 1]");
    }
    if (pos->row_min > pos->row_max) {
      throw SemanticError("position rows are reversed");
    }
  }
  for (const auto& [name, entries] : spec.variants.colorsize) {
    for (const auto& e : entries) {
      require(e.cls, "variants");
      if (e.size.width < 1 || e.size.height < 1) {
        throw SemanticError("colorsize entry for '" + e.cls + "' has size < 1");
      }
    }
  }
  for (const auto& [name, entries] : spec.variants.image) {
    for (const auto& e : entries) require(e.cls, "variants");
  }
}

std::string serialize(const GameSpec& spec) {
  std::ostringstream out;
  out << "game " << spec.name << '\n';
  out << "renderer "
      << (spec.renderer == Renderer::kSprite ? "sprite" : "flat_rect") << '\n';
  out << "max_score " << spec.max_score << '\n';

  out << "\n[grid]\n";
  out << "size " << spec.grid_width << ' ' << spec.grid_height << '\n';
  out << "background " << format_color(spec.background) << '\n';

  out << "\n[classes]\n";
  for (const auto& c : spec.object_classes) {
    out << "class " << c.id << ' ' << format_color(c.color) << ' '
        << format_extent(c.size) << ' ' << c.sprite << ' ' << c.scale_percent
        << '\n';
  }

  out << "\n[keys]\n";
  for (const auto& k : spec.actions) {
    switch (k.kind) {
      case KeyDef::Kind::kNoop:
        out << "key noop\n";
        break;
      case KeyDef::Kind::kMove:
        out << "key move " << k.delta.x << ' ' << k.delta.y << '\n';
        break;
      case KeyDef::Kind::kFire:
        out << "key fire " << k.spawn_class << ' ' << k.delta.x << ' '
            << k.delta.y << ' ' << k.max_live << '\n';
        break;
    }
  }

  out << "\n[dynamics]\n";
  for (const auto& rule : spec.dynamics_rules) std::visit(RuleWriter{out}, rule);

  out << "\n[rewards]\n";
  for (const auto& c : spec.rewards.contacts) {
    out << "contact " << c.first << ' ' << c.second << ' ' << c.reward << ' '
        << format_removal(c.remove) << '\n';
  }
  out << "step " << spec.rewards.per_step << '\n';
  out << "win " << spec.rewards.on_win << '\n';
  out << "lose " << spec.rewards.on_lose << '\n';

  out << "\n[termination]\n";
  const auto& t = spec.termination;
  if (t.timeout > 0) {
    out << "timeout " << t.timeout << ' '
        << (t.timeout_outcome == Outcome::kWin ? "win" : "lose") << '\n';
  }
  for (const auto& g : t.collect) out << "collect " << g.cls << ' ' << g.count << '\n';
  for (const auto& c : t.clear) out << "clear " << c << '\n';
  for (const auto& r : t.reach) out << "reach " << r.cls << ' ' << r.row << '\n';

  out << "\n[levels]\n";
  for (const auto& level : spec.levels) {
    out << "level\n";
    for (const auto& p : level.placements) {
      out << "place " << p.cls << ' ' << p.position.x << ' ' << p.position.y
          << '\n';
    }
  }

  const auto& v = spec.variants;
  if (v.position || !v.colorsize.empty() || !v.image.empty()) {
    out << "\n[variants]\n";
    if (v.position) {
      out << "position " << format_double(v.position->fraction) << ' '
          << v.position->row_min << ' ' << v.position->row_max << ' ';
      for (std::size_t i = 0; i < v.position->classes.size(); ++i) {
        out << (i ? "," : "") << v.position->classes[i];
      }
      out << '\n';
    }
    for (const auto& [name, entries] : v.colorsize) {
      for (const auto& e : entries) {
        out << "colorsize " << name << ' ' << e.cls << ' '
            << format_color(e.color) << ' ' << format_extent(e.size) << ' '
            << e.scale_percent << '\n';
      }
    }
    for (const auto& [name, entries] : v.image) {
      for (const auto& e : entries) {
        out << "image " << name << ' ' << e.cls << ' ' << e.sprite << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace afford

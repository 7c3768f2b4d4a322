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

#include "afford/engine.h"

#include <algorithm>
#include <string>
#include <tuple>

#include "afford/error.h"

namespace afford {

namespace {

bool is_player_contact(const Game::CompiledContact& c, int player) {
  return c.first == player || c.second == player;
}

}  // namespace

Game::Game(GameSpec spec) : spec_(std::move(spec)) {
  validate(spec_);
  player_class_ = class_index(spec_.player_class());

  nominal_velocity_.assign(spec_.object_classes.size(), Cell{});
  for (const auto& rule : spec_.dynamics_rules) {
    if (const auto* m = std::get_if<MoveRule>(&rule)) {
      nominal_velocity_[class_index(m->cls)] = m->delta;
    } else if (const auto* m = std::get_if<MarchRule>(&rule)) {
      nominal_velocity_[class_index(m->cls)] = Cell{1, 0};
    }
  }

  const int n = num_classes();
  contact_table_.assign(static_cast<std::size_t>(n) * n, {});
  const auto& rules = spec_.rewards.contacts;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    CompiledContact c{class_index(rules[i].first), class_index(rules[i].second),
                      rules[i].reward, rules[i].remove, 0};
    contacts_.push_back(c);
  }
  // Player contacts resolve before everything else; declared order otherwise.
  int order = 0;
  for (int pass = 0; pass < 2; ++pass) {
    for (auto& c : contacts_) {
      if (is_player_contact(c, player_class_) == (pass == 0)) c.order = order++;
    }
  }
  for (std::size_t i = 0; i < contacts_.size(); ++i) {
    contact_table_[contacts_[i].first * n + contacts_[i].second].push_back(
        static_cast<int>(i));
  }
}

int Game::class_index(std::string_view id) const {
  for (std::size_t i = 0; i < spec_.object_classes.size(); ++i) {
    if (spec_.object_classes[i].id == id) return static_cast<int>(i);
  }
  throw SemanticError("undeclared class '" + std::string(id) + "'");
}

std::shared_ptr<const Game> compile(GameSpec spec) {
  return std::make_shared<const Game>(std::move(spec));
}

const char* to_string(Status status) {
  switch (status) {
    case Status::kRunning: return "running";
    case Status::kWon: return "won";
    case Status::kLost: return "lost";
  }
  return "running";
}

const std::string& WorldState::class_id(const ObjectInstance& obj) const {
  return game->class_def(obj.class_index).id;
}

const ObjectInstance* WorldState::player() const {
  const int cls = game->player_class();
  for (const auto& o : objects) {
    if (o.class_index == cls) return &o;
  }
  return nullptr;
}

bool operator==(const WorldState& a, const WorldState& b) {
  const bool same_game =
      a.game == b.game || (a.game && b.game && a.game->spec() == b.game->spec());
  return same_game && a.objects == b.objects && a.score == b.score &&
         a.level_index == b.level_index && a.step_count == b.step_count &&
         a.rng == b.rng && a.status == b.status &&
         a.next_instance_id == b.next_instance_id &&
         a.march_direction == b.march_direction && a.march_progress == b.march_progress &&
         a.collected == b.collected;
}

namespace {

class Stepper {
 public:
  Stepper(WorldState& s, StepOutcome& out)
      : s_(s), game_(*s.game), spec_(game_.spec()), out_(out),
        first_new_id_(s.next_instance_id) {}

  void run(int action) {
    apply_key(action);
    const auto& rules = spec_.dynamics_rules;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      std::visit([&](const auto& r) { apply(r, i); }, rules[i]);
    }
    resolve_contacts();
    if (!player_removed_) out_.reward += spec_.rewards.per_step;
    ++s_.step_count;
    terminate();
    s_.score += out_.reward;
    out_.status_after = s_.status;
  }

 private:
  bool born_this_step(const ObjectInstance& o) const {
    return o.instance_id >= first_new_id_;
  }
  bool fits(const Box& b) const { return b.inside(spec_.grid_width, spec_.grid_height); }

  void spawn(int cls, Cell at) {
    const ObjectClassDef& def = game_.class_def(cls);
    ObjectInstance obj{s_.next_instance_id, cls, at, def.size, def.color,
                       game_.nominal_velocity(cls)};
    if (!fits(obj.box())) return;
    ++s_.next_instance_id;
    s_.objects.push_back(obj);
    out_.events.push_back({Event::Kind::kSpawn, obj.instance_id, -1});
  }

  void drop_outside() {
    auto& objs = s_.objects;
    for (const auto& o : objs) {
      if (!fits(o.box())) out_.events.push_back({Event::Kind::kDespawn, o.instance_id, -1});
    }
    objs.erase(std::remove_if(objs.begin(), objs.end(),
                              [&](const ObjectInstance& o) { return !fits(o.box()); }),
               objs.end());
  }

  bool draw(double rate) {
    return std::bernoulli_distribution(rate)(s_.rng);
  }

  void apply_key(int action) {
    const KeyDef& key = spec_.actions[action];
    ObjectInstance* player = nullptr;
    for (auto& o : s_.objects) {
      if (o.class_index == game_.player_class()) player = &o;
    }
    if (!player) throw ContractViolation("running state without a player");
    player->velocity = {};
    if (key.kind == KeyDef::Kind::kMove) {
      const PlayerRule* rule = nullptr;
      for (const auto& r : spec_.dynamics_rules) {
        if (const auto* p = std::get_if<PlayerRule>(&r)) rule = p;
      }
      Cell to = player->position + key.delta;
      const int max_x = spec_.grid_width - player->bbox.width;
      const int max_y = spec_.grid_height - player->bbox.height;
      if (rule->edge == EdgeMode::kWrap) {
        to.x = ((to.x % (max_x + 1)) + max_x + 1) % (max_x + 1);
        to.y = ((to.y % (max_y + 1)) + max_y + 1) % (max_y + 1);
      } else {
        to.x = std::clamp(to.x, 0, max_x);
        to.y = std::clamp(to.y, 0, max_y);
      }
      player->velocity = to - player->position;
      player->position = to;
    } else if (key.kind == KeyDef::Kind::kFire) {
      const int cls = game_.class_index(key.spawn_class);
      const auto live = std::count_if(s_.objects.begin(), s_.objects.end(),
                                      [&](const ObjectInstance& o) { return o.class_index == cls; });
      if (live < key.max_live) spawn(cls, player->position + key.delta);
    }
  }

  void apply(const PlayerRule&, std::size_t) {}

  void apply(const MoveRule& r, std::size_t) {
    if (s_.step_count % r.period != 0) return;
    const int cls = game_.class_index(r.cls);
    for (auto& o : s_.objects) {
      if (o.class_index != cls || born_this_step(o)) continue;
      o.position = o.position + r.delta;
      o.velocity = r.delta;
    }
    drop_outside();
  }

  void apply(const MarchRule& r, std::size_t index) {
    if (s_.step_count % r.period != 0) return;
    const int cls = game_.class_index(r.cls);
    if (r.wrap) {
      march_wrap(r, cls, index);
      return;
    }
    int& dir = s_.march_direction[index];
    bool blocked = false;
    bool any = false;
    for (const auto& o : s_.objects) {
      if (o.class_index != cls || born_this_step(o)) continue;
      any = true;
      Box moved = o.box();
      moved.origin.x += dir;
      if (!fits(moved)) blocked = true;
    }
    if (!any) return;
    const Cell delta = blocked ? Cell{0, r.drop} : Cell{dir, 0};
    if (blocked) dir = -dir;
    for (auto& o : s_.objects) {
      if (o.class_index != cls || born_this_step(o)) continue;
      o.position = o.position + delta;
      o.velocity = {dir, 0};
    }
    drop_outside();
  }

  void march_wrap(const MarchRule& r, int cls, std::size_t index) {
    const int width = game_.spec().grid_width;
    int& progress = s_.march_progress[index];
    const bool drop = ++progress == width;
    if (drop) progress = 0;
    for (auto& o : s_.objects) {
      if (o.class_index != cls || born_this_step(o)) continue;
      o.position.x = (o.position.x + 1) % width;
      if (drop) o.position.y += r.drop;
      o.velocity = {1, 0};
    }
    drop_outside();
  }

  void apply(const SpawnRule& r, std::size_t) {
    const int source = game_.class_index(r.source);
    const int cls = game_.class_index(r.cls);
    std::vector<Cell> origins;
    for (const auto& o : s_.objects) {
      if (o.class_index == source && !born_this_step(o)) origins.push_back(o.position);
    }
    for (Cell at : origins) {
      if (draw(r.rate)) spawn(cls, at + r.offset);
    }
  }

  void apply(const SpawnRandomRule& r, std::size_t) {
    if (!draw(r.rate)) return;
    std::uniform_int_distribution<std::size_t> pick(0, r.columns.size() - 1);
    spawn(game_.class_index(r.cls), Cell{r.columns[pick(s_.rng)], r.row});
  }

  void apply(const ShootRule& r, std::size_t) {
    if (!draw(r.rate)) return;
    const int shooter = game_.class_index(r.shooter);
    std::vector<Cell> origins;
    for (const auto& o : s_.objects) {
      if (o.class_index == shooter && !born_this_step(o)) origins.push_back(o.position);
    }
    if (origins.empty()) return;
    std::uniform_int_distribution<std::size_t> pick(0, origins.size() - 1);
    spawn(game_.class_index(r.cls), origins[pick(s_.rng)] + r.offset);
  }

  void resolve_contacts() {
    struct Candidate {
      int order;
      std::size_t a;  // object indices, a has the rule's first class
      std::size_t b;
      int rule;
    };
    auto& objs = s_.objects;
    std::vector<Candidate> found;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      for (std::size_t j = i + 1; j < objs.size(); ++j) {
        const auto& ab = game_.contacts_for(objs[i].class_index, objs[j].class_index);
        const auto& ba = game_.contacts_for(objs[j].class_index, objs[i].class_index);
        if (ab.empty() && ba.empty()) continue;
        if (!objs[i].box().overlaps(objs[j].box())) continue;
        for (int r : ab) found.push_back({game_.contacts()[r].order, i, j, r});
        for (int r : ba) found.push_back({game_.contacts()[r].order, j, i, r});
      }
    }
    if (found.empty()) return;
    std::sort(found.begin(), found.end(), [&](const Candidate& x, const Candidate& y) {
      if (x.order != y.order) return x.order < y.order;
      if (objs[x.a].instance_id != objs[y.a].instance_id)
        return objs[x.a].instance_id < objs[y.a].instance_id;
      return objs[x.b].instance_id < objs[y.b].instance_id;
    });

    std::vector<bool> removed(objs.size(), false);
    const int player = game_.player_class();
    for (const auto& c : found) {
      if (removed[c.a] || removed[c.b]) continue;
      const auto& rule = game_.contacts()[c.rule];
      out_.reward += rule.reward;
      out_.events.push_back({Event::Kind::kContact, objs[c.a].instance_id,
                             objs[c.b].instance_id});
      const bool drop_a = rule.remove == Removal::kFirst || rule.remove == Removal::kBoth;
      const bool drop_b = rule.remove == Removal::kSecond || rule.remove == Removal::kBoth;
      for (auto [idx, drop, other] : {std::tuple{c.a, drop_a, c.b},
                                      std::tuple{c.b, drop_b, c.a}}) {
        if (!drop) continue;
        removed[idx] = true;
        out_.events.push_back({Event::Kind::kDespawn, objs[idx].instance_id, -1});
        if (objs[idx].class_index == player) player_removed_ = true;
        if (objs[other].class_index == player) ++s_.collected[objs[idx].class_index];
      }
    }
    std::size_t w = 0;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      if (!removed[i]) objs[w++] = objs[i];
    }
    objs.resize(w);
  }

  void terminate() {
    const auto& t = spec_.termination;
    bool lost = player_removed_;
    for (const auto& limit : t.reach) {
      const int cls = game_.class_index(limit.cls);
      for (const auto& o : s_.objects) {
        if (o.class_index == cls && o.box().bottom() - 1 >= limit.row) lost = true;
      }
    }
    bool won = false;
    if (!lost) {
      for (const auto& g : t.collect) {
        if (s_.collected[game_.class_index(g.cls)] >= g.count) won = true;
      }
      for (const auto& c : t.clear) {
        const int cls = game_.class_index(c);
        if (std::none_of(s_.objects.begin(), s_.objects.end(),
                         [&](const ObjectInstance& o) { return o.class_index == cls; })) {
          won = true;
        }
      }
      if (!won && t.timeout > 0 && s_.step_count >= t.timeout) {
        if (t.timeout_outcome == Outcome::kWin) won = true;
        else lost = true;
      }
    }
    if (lost) {
      s_.status = Status::kLost;
      out_.reward += spec_.rewards.on_lose;
      auto& objs = s_.objects;
      for (const auto& o : objs) {
        if (o.class_index == game_.player_class()) {
          out_.events.push_back({Event::Kind::kDespawn, o.instance_id, -1});
        }
      }
      objs.erase(std::remove_if(objs.begin(), objs.end(),
                                [&](const ObjectInstance& o) {
                                  return o.class_index == game_.player_class();
                                }),
                 objs.end());
    } else if (won) {
      s_.status = Status::kWon;
      out_.reward += spec_.rewards.on_win;
    }
  }

  WorldState& s_;
  const Game& game_;
  const GameSpec& spec_;
  StepOutcome& out_;
  const int first_new_id_;
  bool player_removed_ = false;
};

}  // namespace

WorldState reset(std::shared_ptr<const Game> game, int level, std::uint64_t seed,
                 int carried_score) {
  if (level < 0 || level >= game->num_levels()) {
    throw ContractViolation("level " + std::to_string(level) + " out of range [0, " +
                            std::to_string(game->num_levels()) + ")");
  }
  WorldState s;
  s.rng.seed(seed);
  s.score = carried_score;
  s.level_index = level;
  s.march_direction.assign(game->spec().dynamics_rules.size(), 1);
  s.march_progress.assign(game->spec().dynamics_rules.size(), 0);
  s.collected.assign(game->num_classes(), 0);
  for (const auto& p : game->spec().levels[level].placements) {
    const int cls = game->class_index(p.cls);
    const auto& def = game->class_def(cls);
    s.objects.push_back({s.next_instance_id++, cls, p.position, def.size, def.color,
                         game->nominal_velocity(cls)});
  }
  s.game = std::move(game);
  return s;
}

WorldState reset(const GameSpec& spec, int level, std::uint64_t seed) {
  return reset(compile(spec), level, seed);
}

StepOutcome step_in_place(WorldState& state, int action) {
  if (state.status != Status::kRunning) {
    throw ContractViolation(std::string("step on a finished state (") +
                            to_string(state.status) + ")");
  }
  if (action < 0 || action >= state.game->num_keys()) {
    throw ContractViolation("action " + std::to_string(action) + " outside the key set");
  }
  StepOutcome out;
  Stepper(state, out).run(action);
  return out;
}

std::pair<WorldState, StepOutcome> step(const WorldState& state, int action) {
  WorldState next = state;
  StepOutcome out = step_in_place(next, action);
  return {std::move(next), std::move(out)};
}

std::vector<ObjectView> observe(const WorldState& state) {
  std::vector<ObjectView> views;
  views.reserve(state.objects.size());
  for (const auto& o : state.objects) {
    views.push_back({o.instance_id, o.box(), o.color, o.velocity});
  }
  return views;
}

}  // namespace afford

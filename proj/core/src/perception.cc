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

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "afford/error.h"
#include "afford/perception.h"

namespace afford {

std::string to_string(const AppearanceSignature& sig) {
  std::ostringstream out;
  out << int(sig.color.r) << ',' << int(sig.color.g) << ',' << int(sig.color.b) << ' '
      << sig.size.width << 'x' << sig.size.height;
  return out.str();
}

const char* to_string(KeyEffect effect) {
  switch (effect) {
    case KeyEffect::kMoveLeft: return "move_left";
    case KeyEffect::kMoveRight: return "move_right";
    case KeyEffect::kMoveUp: return "move_up";
    case KeyEffect::kMoveDown: return "move_down";
    case KeyEffect::kFire: return "fire";
    case KeyEffect::kNoEffect: return "no_effect";
  }
  return "no_effect";
}

const char* to_string(Category category) {
  switch (category) {
    case Category::kAgent: return "agent";
    case Category::kStatic: return "static";
    case Category::kMovingGood: return "moving_good";
    case Category::kMovingBad: return "moving_bad";
    case Category::kAgentObject: return "agent_object";
    case Category::kUnknown: return "unknown";
  }
  return "unknown";
}

Category parse_category(std::string_view text) {
  for (Category c : {Category::kAgent, Category::kStatic, Category::kMovingGood,
                     Category::kMovingBad, Category::kAgentObject, Category::kUnknown}) {
    if (text == to_string(c)) return c;
  }
  throw IoError("unknown category '" + std::string(text) + "'");
}

TrackedObjects track(const Frame& prev, const Frame& cur, int gate) {
  struct Pair {
    int distance;
    int prev;
    int cur;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < static_cast<int>(prev.size()); ++i) {
    const AppearanceSignature sig = signature_of(prev[i]);
    for (int j = 0; j < static_cast<int>(cur.size()); ++j) {
      if (signature_of(cur[j]) != sig) continue;
      const int d = manhattan(prev[i].box.origin, cur[j].box.origin);
      if (d <= gate) pairs.push_back({d, i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(a.distance, a.prev, a.cur) < std::tie(b.distance, b.prev, b.cur);
  });

  std::vector<bool> used_prev(prev.size(), false);
  std::vector<bool> used_cur(cur.size(), false);
  TrackedObjects out;
  for (const Pair& p : pairs) {
    if (used_prev[p.prev] || used_cur[p.cur]) continue;
    used_prev[p.prev] = true;
    used_cur[p.cur] = true;
    out.correspondences.push_back(
        {p.prev, p.cur, cur[p.cur].box.origin - prev[p.prev].box.origin});
  }
  std::sort(out.correspondences.begin(), out.correspondences.end(),
            [](const Match& a, const Match& b) { return a.prev < b.prev; });
  for (int j = 0; j < static_cast<int>(cur.size()); ++j) {
    if (!used_cur[j]) out.entered.push_back(j);
  }
  for (int i = 0; i < static_cast<int>(prev.size()); ++i) {
    if (!used_prev[i]) out.exited.push_back(i);
  }
  return out;
}

void CategoryModel::update(const StepObservation& step) {
  std::vector<AppearanceSignature> touched;

  if (step.tracked && step.cur) {
    struct FrameCounts {
      int moved = 0;
      int stayed = 0;
    };
    std::map<AppearanceSignature, FrameCounts> counts;
    for (const Match& m : step.tracked->correspondences) {
      auto& c = counts[signature_of((*step.cur)[m.cur])];
      if (m.displacement == Cell{}) ++c.stayed;
      else ++c.moved;
    }
    for (const auto& [sig, c] : counts) {
      Evidence& ev = evidence_[sig];
      ev.moved_count += c.moved;
      ev.stayed_count += c.stayed;
      ev.stationary_run = c.moved == 0 ? ev.stationary_run + 1 : 0;
      touched.push_back(sig);
    }
    for (int idx : step.tracked->entered) {
      const ObjectView& view = (*step.cur)[idx];
      const AppearanceSignature sig = signature_of(view);
      Evidence& ev = evidence_[sig];
      ++ev.entered_count;
      if (step.fired && step.agent_box && agent_ != sig &&
          view.box.chebyshev_distance(*step.agent_box) <= 1) {
        ++ev.spawned_by_agent_count;
      }
      touched.push_back(sig);
    }
  }

  for (const ContactEvidence& c : step.contacts) {
    Evidence& ev = evidence_[c.other];
    if (c.agent_died || c.reward < 0) ++ev.negative_contacts;
    else if (c.reward > 0) ++ev.positive_contacts;
    touched.push_back(c.other);
  }

  for (const auto& sig : touched) resolve(sig, evidence_[sig]);
}

void CategoryModel::resolve(const AppearanceSignature& sig, Evidence& ev) {
  if (agent_ && sig == *agent_) return;
  if (ev.positive_contacts > 0 && ev.negative_contacts > 0 && !ev.contradictory) {
    ev.contradictory = true;
    warnings_.push_back("contradictory contact evidence for " + to_string(sig) + ": " +
                        std::to_string(ev.positive_contacts) + " positive, " +
                        std::to_string(ev.negative_contacts) +
                        " negative; resolving by majority");
  }
  if (assignments_.count(sig)) return;

  Category category = Category::kUnknown;
  if (ev.spawned_by_agent_count >= kSpawnEvidence &&
      ev.spawned_by_agent_count >= kSpawnShare * ev.entered_count) {
    category = Category::kAgentObject;
  } else if (ev.moved_count > 0 && (ev.positive_contacts > 0 || ev.negative_contacts > 0)) {
    category = ev.negative_contacts >= ev.positive_contacts ? Category::kMovingBad
                                                            : Category::kMovingGood;
  } else if (ev.moved_count == 0 && ev.stationary_run >= kStaticFrames) {
    category = Category::kStatic;
  }
  if (category != Category::kUnknown) assignments_.emplace(sig, category);
}

Category CategoryModel::classify(const AppearanceSignature& sig) const {
  if (agent_ && sig == *agent_) return Category::kAgent;
  auto it = assignments_.find(sig);
  return it == assignments_.end() ? Category::kUnknown : it->second;
}

bool CategoryModel::resolved(const AppearanceSignature& sig) const {
  return classify(sig) != Category::kUnknown;
}

void CategoryModel::write(std::ostream& out) const {
  out << "# signature category moved stayed positive negative spawned entered run\n";
  std::map<AppearanceSignature, Evidence> rows = evidence_;
  if (agent_) rows.try_emplace(*agent_);
  for (const auto& [sig, ev] : rows) {
    out << to_string(sig) << ' ' << to_string(classify(sig)) << ' ' << ev.moved_count
        << ' ' << ev.stayed_count << ' ' << ev.positive_contacts << ' '
        << ev.negative_contacts << ' ' << ev.spawned_by_agent_count << ' '
        << ev.entered_count << ' ' << ev.stationary_run << '\n';
  }
}

CategoryModel CategoryModel::read(std::istream& in) {
  CategoryModel model;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string color, size, category;
    Evidence ev;
    if (!(fields >> color >> size >> category >> ev.moved_count >> ev.stayed_count >>
          ev.positive_contacts >> ev.negative_contacts >> ev.spawned_by_agent_count >>
          ev.entered_count >> ev.stationary_run)) {
      throw IoError("malformed category table line " + std::to_string(number));
    }
    AppearanceSignature sig;
    int r, g, b;
    char c1, c2, x;
    std::istringstream cs(color), ss(size);
    if (!(cs >> r >> c1 >> g >> c2 >> b) || c1 != ',' || c2 != ',' ||
        !(ss >> sig.size.width >> x >> sig.size.height) || x != 'x') {
      throw IoError("malformed signature on category table line " + std::to_string(number));
    }
    sig.color = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                 static_cast<std::uint8_t>(b)};
    ev.contradictory = ev.positive_contacts > 0 && ev.negative_contacts > 0;
    const Category cat = parse_category(category);
    if (cat == Category::kAgent) model.agent_ = sig;
    else if (cat != Category::kUnknown) model.assignments_.emplace(sig, cat);
    if (cat != Category::kAgent || ev != Evidence{}) model.evidence_.emplace(sig, ev);
  }
  return model;
}

CategoryModel update_model(CategoryModel model, const StepObservation& step) {
  model.update(step);
  return model;
}

Category classify(const AppearanceSignature& sig, const CategoryModel& model) {
  return model.classify(sig);
}

std::vector<ContactEvidence> agent_contacts(const Frame& prev, const Transition& t,
                                            int agent_instance_id) {
  std::vector<ContactEvidence> out;
  auto find = [&](int id) -> const ObjectView* {
    for (const auto& v : prev) {
      if (v.instance_id == id) return &v;
    }
    if (!t.level_won) {
      for (const auto& v : t.frame) {
        if (v.instance_id == id) return &v;
      }
    }
    return nullptr;
  };
  const bool died = t.status == Status::kLost;
  for (const Event& e : t.events) {
    if (e.kind != Event::Kind::kContact) continue;
    int other = -1;
    if (e.first == agent_instance_id) other = e.second;
    else if (e.second == agent_instance_id) other = e.first;
    if (other < 0) continue;
    if (const ObjectView* v = find(other)) {
      out.push_back({signature_of(*v), t.reward, died});
    }
  }
  return out;
}

}  // namespace afford

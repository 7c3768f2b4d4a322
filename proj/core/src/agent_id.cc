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

#include "afford/agent_id.h"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "afford/error.h"
#include "afford/perception.h"
#include "afford/seed.h"

namespace afford {

namespace {

std::optional<Box> find_box(const Frame& frame, const AppearanceSignature& sig) {
  for (const auto& v : frame) {
    if (signature_of(v) == sig) return v.box;
  }
  return std::nullopt;
}

// Most common displacement of `sig` between two frames, if it was tracked.
std::optional<Cell> displacement_of(const Frame& prev, const Frame& cur,
                                    const TrackedObjects& tracked,
                                    const AppearanceSignature& sig) {
  std::map<Cell, int> votes;
  for (const Match& m : tracked.correspondences) {
    if (signature_of(cur[m.cur]) == sig) ++votes[m.displacement];
  }
  (void)prev;
  if (votes.empty()) return std::nullopt;
  auto best = std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
    return a.second < b.second;
  });
  return best->first;
}

std::string format_set(const std::vector<AppearanceSignature>& sigs) {
  std::string out = "{";
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    out += (i ? "; " : "") + to_string(sigs[i]);
  }
  return out + "}";
}

}  // namespace

const char* to_string(Bias bias) {
  switch (bias) {
    case Bias::kUniqueness: return "uniqueness";
    case Bias::kPermanence: return "permanence";
    case Bias::kMotionBinding: return "motion_binding";
  }
  return "uniqueness";
}

std::vector<AppearanceSignature> filter_unique(std::span<const Frame> frames) {
  std::set<AppearanceSignature> seen;
  std::set<AppearanceSignature> repeated;
  for (const Frame& frame : frames) {
    std::map<AppearanceSignature, int> counts;
    for (const auto& v : frame) ++counts[signature_of(v)];
    for (const auto& [sig, n] : counts) {
      seen.insert(sig);
      if (n > 1) repeated.insert(sig);
    }
  }
  std::vector<AppearanceSignature> out;
  for (const auto& sig : seen) {
    if (!repeated.count(sig)) out.push_back(sig);
  }
  return out;
}

std::vector<AppearanceSignature> filter_permanent(
    std::span<const Frame> frames, const std::vector<AppearanceSignature>& candidates) {
  std::vector<AppearanceSignature> out;
  for (const auto& sig : candidates) {
    const bool always = std::all_of(frames.begin(), frames.end(), [&](const Frame& f) {
      return find_box(f, sig).has_value();
    });
    if (always) out.push_back(sig);
  }
  return out;
}

std::vector<Frame> observe_window(Environment& env, int window, std::uint64_t seed) {
  std::vector<Frame> frames;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> key(0, env.num_keys() - 1);
  std::uint64_t episode = 0;
  frames.push_back(env.reset(mix_seed(seed, episode++)));
  while (static_cast<int>(frames.size()) < window) {
    Transition t = env.step(key(rng));
    if (t.done) {
      frames.push_back(env.reset(mix_seed(seed, episode++)));
    } else {
      frames.push_back(std::move(t.frame));
    }
  }
  return frames;
}

AppearanceSignature motion_binding_test(Environment& env,
                                        const std::vector<AppearanceSignature>& candidates,
                                        const IdentifyOptions& options) {
  if (candidates.empty()) throw IdentificationFailed("no candidate to test for motion binding");
  const int keys = env.num_keys();
  std::vector<AppearanceSignature> passed;
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const auto& sig = candidates[ci];
    // Consistent displacement per key, if any.
    std::vector<std::optional<Cell>> response(keys);
    for (int k = 0; k < keys; ++k) {
      std::map<Cell, int> votes;
      for (int trial = 0; trial < options.trials; ++trial) {
        Frame before = env.reset(mix_seed(options.seed, static_cast<std::uint64_t>(k) * 1000 + trial));
        Transition t = env.step(k);
        if (t.level_won) continue;
        TrackedObjects tracked = track(before, t.frame);
        if (auto d = displacement_of(before, t.frame, tracked, sig)) ++votes[*d];
      }
      for (const auto& [d, n] : votes) {
        if (n >= options.consistency * options.trials) response[k] = d;
      }
    }
    bool bound = false;
    for (int a = 0; a < keys && !bound; ++a) {
      for (int b = a + 1; b < keys && !bound; ++b) {
        bound = response[a] && response[b] && *response[a] != *response[b];
      }
    }
    if (bound) passed.push_back(sig);
  }
  if (passed.empty()) {
    throw IdentificationFailed("no candidate moves consistently with key presses among " +
                               format_set(candidates));
  }
  if (passed.size() > 1) {
    throw AmbiguousAgent("several candidates respond to keys: " + format_set(passed));
  }
  return passed.front();
}

Identification identify_agent(Environment& env, const IdentifyOptions& options) {
  const std::vector<Frame> frames = observe_window(env, options.window, options.seed);
  Identification id;
  BiasReport& report = id.report;
  std::set<AppearanceSignature> all;
  for (const Frame& f : frames) {
    for (const auto& v : f) all.insert(signature_of(v));
  }
  report.initial.assign(all.begin(), all.end());
  if (report.initial.empty()) throw IdentificationFailed("no objects observed");

  // A prior that would eliminate everything is uninformative and is skipped.
  auto stage = [&](std::vector<AppearanceSignature> next,
                   const std::vector<AppearanceSignature>& before) {
    if (next.empty()) next = before;
    report.candidates_after_each_stage.push_back(std::move(next));
    return report.candidates_after_each_stage.back();
  };

  auto unique = stage(filter_unique(frames), report.initial);
  AppearanceSignature agent;
  if (unique.size() == 1) {
    report.bias_used = Bias::kUniqueness;
    agent = unique.front();
  } else {
    auto permanent = stage(filter_permanent(frames, unique), unique);
    if (permanent.size() == 1) {
      report.bias_used = Bias::kPermanence;
      agent = permanent.front();
    } else {
      report.bias_used = Bias::kMotionBinding;
      agent = motion_binding_test(env, permanent, options);
      report.candidates_after_each_stage.push_back({agent});
    }
  }

  id.profile.signature = agent;
  const Frame& last = frames.back();
  for (std::size_t i = 0; i < last.size(); ++i) {
    if (signature_of(last[i]) == agent) {
      id.profile.instance_handle = static_cast<int>(i);
      break;
    }
  }
  return id;
}

std::vector<KeyEffect> discover_key_bindings(Environment& env,
                                             const AppearanceSignature& agent,
                                             const BindingOptions& options) {
  std::vector<KeyEffect> key_map;
  for (int k = 0; k < env.num_keys(); ++k) {
    std::map<Cell, int> moves;
    int spawns = 0;
    int observed = 0;
    for (int p = 0; p < options.presses; ++p) {
      Frame before = env.reset(mix_seed(options.seed, static_cast<std::uint64_t>(k) * 1000 + p));
      const auto start = find_box(before, agent);
      if (!start) continue;
      Transition t = env.step(k);
      if (t.level_won) continue;
      const auto end = find_box(t.frame, agent);
      if (!end) continue;
      ++observed;
      ++moves[end->origin - start->origin];
      const TrackedObjects tracked = track(before, t.frame);
      const bool spawned = std::any_of(
          tracked.entered.begin(), tracked.entered.end(), [&](int idx) {
            const auto& v = t.frame[idx];
            return signature_of(v) != agent && v.box.chebyshev_distance(*start) <= 1;
          });
      if (spawned) ++spawns;
    }
    KeyEffect effect = KeyEffect::kNoEffect;
    auto dominant = std::max_element(moves.begin(), moves.end(), [](const auto& a, const auto& b) {
      return a.second < b.second;
    });
    if (dominant != moves.end() && dominant->first != Cell{} &&
        2 * dominant->second > observed) {
      const Cell d = dominant->first;
      if (std::abs(d.x) >= std::abs(d.y)) {
        effect = d.x < 0 ? KeyEffect::kMoveLeft : KeyEffect::kMoveRight;
      } else {
        effect = d.y < 0 ? KeyEffect::kMoveUp : KeyEffect::kMoveDown;
      }
    } else if (spawns >= options.fire_threshold) {
      effect = KeyEffect::kFire;
    }
    key_map.push_back(effect);
  }
  return key_map;
}

std::string format_report(const BiasReport& report, const AgentProfile& profile) {
  static constexpr Bias kStages[] = {Bias::kUniqueness, Bias::kPermanence, Bias::kMotionBinding};
  std::ostringstream out;
  out << "observed " << format_set(report.initial) << '\n';
  for (std::size_t i = 0; i < report.candidates_after_each_stage.size(); ++i) {
    out << "after " << to_string(kStages[i]) << ' '
        << format_set(report.candidates_after_each_stage[i]) << '\n';
  }
  out << "bias_used " << to_string(report.bias_used) << '\n';
  out << "agent " << to_string(profile.signature) << '\n';
  for (std::size_t k = 0; k < profile.key_map.size(); ++k) {
    out << "key " << k << ' ' << to_string(profile.key_map[k]) << '\n';
  }
  return out.str();
}

}  // namespace afford
